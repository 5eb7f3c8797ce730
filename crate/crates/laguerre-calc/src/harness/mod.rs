//! Estimate-verification engine: Gaussian-bound constant fitting against
//! kernel samples, the inequality suites, discrete operator-norm machinery,
//! and the weighted norm sweep probing the admissible p-interval.

pub mod fit;
pub mod grids;
pub mod majorants;
pub mod offdiag;
pub mod opnorm;
pub mod suites;
pub mod sweep;

pub use fit::{fit_gaussian_bound, verify_odd_improvement, BoundProfile, BoundReport, RATE_GRID};
pub use grids::{LogGrid, SampleGrid};
pub use majorants::{verify_majorant_suite, MajorantConfig};
pub use offdiag::{verify_offdiagonal, OffdiagConfig};
pub use suites::{
    verify_bessel_suite, verify_h_convolution, verify_kernel_identities, verify_spectral_suite,
};
pub use sweep::{norm_sweep, NormSweepRow, SweepConfig, Verdict};

/// One checked inequality or identity: an observed value against the
/// threshold it must stay within.
#[derive(Clone, Debug)]
pub struct CheckRow {
    pub label: String,
    pub observed: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl CheckRow {
    pub fn leq(label: impl Into<String>, observed: f64, threshold: f64) -> Self {
        CheckRow {
            label: label.into(),
            observed,
            threshold,
            pass: observed.is_finite() && observed <= threshold,
        }
    }

    pub fn strictly_less(label: impl Into<String>, observed: f64, threshold: f64) -> Self {
        CheckRow {
            label: label.into(),
            observed,
            threshold,
            pass: observed.is_finite() && observed < threshold,
        }
    }

    /// A control that must violate its nominal bound (growth expected).
    pub fn geq(label: impl Into<String>, observed: f64, threshold: f64) -> Self {
        CheckRow {
            label: label.into(),
            observed,
            threshold,
            pass: observed >= threshold,
        }
    }
}

/// A named list of checks; passes when every row does.
#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: String,
    pub rows: Vec<CheckRow>,
}

impl SuiteReport {
    pub fn new(name: impl Into<String>) -> Self {
        SuiteReport {
            name: name.into(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: CheckRow) {
        self.rows.push(row);
    }

    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn pass_count(&self) -> usize {
        self.rows.iter().filter(|r| r.pass).count()
    }

    pub fn fail_count(&self) -> usize {
        self.rows.len() - self.pass_count()
    }
}
