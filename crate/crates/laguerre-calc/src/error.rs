use thiserror::Error;

/// Errors produced by the numerical layer.
///
/// `Domain` covers precondition violations on scalar arguments (poles,
/// out-of-range orders, nonpositive times). `Range` is reserved for
/// parameters that are structurally valid but outside the interval where a
/// statement applies, so callers can distinguish "false" from "not
/// applicable".
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("quadrature did not converge: {0}")]
    Convergence(String),
    #[error("singular input: {0}")]
    Singularity(String),
    #[error("parameter out of admissible range: {0}")]
    Range(String),
    #[error("basis mismatch: {0}")]
    BasisMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn dimension(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }
}
