//! Parameter vectors for the operator family: the order vector nu, integer
//! multi-indices, the boundary-degradation exponents gamma and the parity
//! vector sigma, together with the admissible p-interval they determine.

use crate::error::{Error, Result};

/// nu in (-1, infinity)^n.
#[derive(Clone, Debug, PartialEq)]
pub struct NuVector(Vec<f64>);

impl NuVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::dimension("nu vector must have dimension >= 1"));
        }
        if let Some(bad) = entries.iter().find(|v| !(**v > -1.0)) {
            return Err(Error::domain(format!("nu entries must be > -1, got {bad}")));
        }
        Ok(NuVector(entries))
    }

    pub fn scalar(nu: f64) -> Result<Self> {
        NuVector::new(vec![nu])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[f64] {
        &self.0
    }

    /// |nu| = nu_1 + ... + nu_n (plain sum, may be negative).
    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    /// nu + k, entrywise.
    pub fn shifted(&self, k: &MultiIndex) -> Result<NuVector> {
        if k.dim() != self.dim() {
            return Err(Error::dimension("shift index dimension does not match nu"));
        }
        NuVector::new(
            self.0
                .iter()
                .zip(k.entries())
                .map(|(v, j)| v + *j as f64)
                .collect(),
        )
    }
}

/// k in N^n, N = {0, 1, ...}.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(entries: Vec<usize>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::dimension("multi-index must have dimension >= 1"));
        }
        Ok(MultiIndex(entries))
    }

    pub fn scalar(k: usize) -> Result<Self> {
        MultiIndex::new(vec![k])
    }

    pub fn zeros(n: usize) -> Result<Self> {
        MultiIndex::new(vec![0; n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    /// |k| = k_1 + ... + k_n.
    pub fn order(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn is_zero_one(&self) -> bool {
        self.0.iter().all(|&v| v <= 1)
    }
}

/// Per-coordinate exponents gamma_{nu_j} and their maximum gamma_nu.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaExponents {
    pub per_coordinate: Vec<f64>,
    pub max: f64,
}

/// gamma for a single order: -1/2 - nu on (-1, -1/2), zero from -1/2 on.
pub fn gamma_exponent(nu_j: f64) -> f64 {
    if nu_j < -0.5 {
        -0.5 - nu_j
    } else {
        0.0
    }
}

pub fn gamma_nu(nu: &NuVector) -> GammaExponents {
    let per: Vec<f64> = nu.entries().iter().copied().map(gamma_exponent).collect();
    let max = per.iter().copied().fold(0.0, f64::max);
    GammaExponents {
        per_coordinate: per,
        max,
    }
}

/// Parity vector sigma(k): 1 on odd entries, 0 on even ones.
pub fn sigma_of_k(k: &MultiIndex) -> MultiIndex {
    MultiIndex(k.entries().iter().map(|&v| v % 2).collect())
}

/// Open interval (1/(1 - gamma_nu), 1/gamma_{nu+sigma(k)}) of admissible p,
/// with 1/0 read as infinity.
pub fn p_range(nu: &NuVector, k: &MultiIndex) -> Result<(f64, f64)> {
    if nu.dim() != k.dim() {
        return Err(Error::dimension("p_range: nu and k dimensions differ"));
    }
    let lo = 1.0 / (1.0 - gamma_nu(nu).max);
    let shifted = nu.shifted(&sigma_of_k(k))?;
    let g_hi = gamma_nu(&shifted).max;
    let hi = if g_hi == 0.0 { f64::INFINITY } else { 1.0 / g_hi };
    Ok((lo, hi))
}

/// Eigenvalue 4|k| + 2|nu| + 2n of the operator on phi_k^nu.
pub fn eigenvalue(nu: &NuVector, k: &MultiIndex) -> f64 {
    4.0 * k.order() as f64 + 2.0 * nu.sum() + 2.0 * nu.dim() as f64
}

/// Eigenvalue in one coordinate: 4k + 2nu + 2.
pub fn eigenvalue_1d(nu: f64, k: usize) -> f64 {
    4.0 * k as f64 + 2.0 * nu + 2.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nu_vector_validation() {
        assert!(NuVector::new(vec![]).is_err());
        assert!(NuVector::new(vec![-1.0]).is_err());
        assert!(NuVector::new(vec![0.5, -1.2]).is_err());
        assert!(NuVector::new(vec![-0.9, 4.0]).is_ok());
    }

    #[test]
    fn gamma_nu_case_split() {
        let g = gamma_nu(&NuVector::scalar(-0.75).unwrap());
        assert_eq!(g.per_coordinate, vec![0.25]);
        assert_eq!(g.max, 0.25);

        let g = gamma_nu(&NuVector::new(vec![0.3, -0.9]).unwrap());
        assert_eq!(g.per_coordinate, vec![0.0, 0.4]);
        assert_eq!(g.max, 0.4);

        let g = gamma_nu(&NuVector::new(vec![-0.5, 0.0, 7.0]).unwrap());
        assert_eq!(g.max, 0.0);
    }

    #[test]
    fn sigma_parity() {
        let k = MultiIndex::new(vec![3, 2, 1]).unwrap();
        assert_eq!(sigma_of_k(&k).entries(), &[1, 0, 1]);
        let k = MultiIndex::new(vec![0, 0, 0]).unwrap();
        assert_eq!(sigma_of_k(&k).entries(), &[0, 0, 0]);
        let k = MultiIndex::scalar(1).unwrap();
        assert_eq!(sigma_of_k(&k).entries(), &[1]);
    }

    #[test]
    fn p_range_examples() {
        let (lo, hi) = p_range(
            &NuVector::scalar(-0.75).unwrap(),
            &MultiIndex::scalar(2).unwrap(),
        )
        .unwrap();
        assert!((lo - 4.0 / 3.0).abs() < 1e-15);
        assert!((hi - 4.0).abs() < 1e-15);

        let (lo, hi) = p_range(
            &NuVector::scalar(-0.75).unwrap(),
            &MultiIndex::scalar(1).unwrap(),
        )
        .unwrap();
        assert!((lo - 4.0 / 3.0).abs() < 1e-15);
        assert!(hi.is_infinite());

        let (lo, hi) = p_range(
            &NuVector::new(vec![-0.6, 0.2]).unwrap(),
            &MultiIndex::new(vec![1, 2]).unwrap(),
        )
        .unwrap();
        assert!((lo - 10.0 / 9.0).abs() < 1e-12);
        assert!(hi.is_infinite());
    }

    #[test]
    fn eigenvalue_formula() {
        let nu = NuVector::new(vec![0.0, 0.0]).unwrap();
        let k = MultiIndex::new(vec![1, 2]).unwrap();
        assert_eq!(eigenvalue(&nu, &k), 4.0 * 3.0 + 4.0);
        assert_eq!(eigenvalue_1d(0.5, 0), 3.0);
    }
}
