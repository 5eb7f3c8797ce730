//! Fitting the implicit constants of Gaussian kernel bounds.
//!
//! An estimate of the form
//!   |K(t,x,y)| <= C t^{-a} e^{-|x-y|^2/(c t)}
//!                 prod_j (1 + sqrt(t)/x_j)^{e_x_j} (1 + sqrt(t)/y_j)^{e_y_j}
//! has no computable C or c; the falsifiable surrogate is stability. C is the
//! largest sample ratio |K| / envelope; a profile is accepted when some rate
//! c in the grid keeps C within a factor 2 under one grid refinement (node
//! doubling plus corner squeezing). A profile with a wrong boundary exponent
//! fails: the refinement pushes samples toward the corner where the missing
//! factor diverges, and C keeps growing.

use super::grids::SampleGrid;
use crate::error::{Error, Result};
use crate::kernels::delta_k_heat_kernel_1d;

/// Envelope shape of a Gaussian bound; exponents are per-coordinate.
#[derive(Clone, Debug)]
pub struct BoundProfile {
    /// Envelope decays like t^{-time_exponent}.
    pub time_exponent: f64,
    pub e_x: Vec<f64>,
    pub e_y: Vec<f64>,
    /// Optional extra factor e^{-t/beta}.
    pub extra_decay: Option<f64>,
}

impl BoundProfile {
    pub fn new_1d(time_exponent: f64, e_x: f64, e_y: f64) -> Self {
        BoundProfile {
            time_exponent,
            e_x: vec![e_x],
            e_y: vec![e_y],
            extra_decay: None,
        }
    }

    fn envelope(&self, rate: f64, t: f64, x: &[f64], y: &[f64]) -> f64 {
        let d2: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
        let st = t.sqrt();
        let mut v = t.powf(-self.time_exponent) * (-d2 / (rate * t)).exp();
        for (j, &xj) in x.iter().enumerate() {
            v *= (1.0 + st / xj).powf(self.e_x[j]);
        }
        for (j, &yj) in y.iter().enumerate() {
            v *= (1.0 + st / yj).powf(self.e_y[j]);
        }
        if let Some(beta) = self.extra_decay {
            v *= (-t / beta).exp();
        }
        v
    }
}

/// Gaussian rates searched when fitting; the smallest stable rate is kept.
pub const RATE_GRID: [f64; 5] = [1.0, 2.0, 4.0, 8.0, 16.0];

/// Outcome of one bound fit.
#[derive(Clone, Debug)]
pub struct BoundReport {
    pub profile: BoundProfile,
    /// Chosen Gaussian rate c (the smallest stable entry of `RATE_GRID`).
    pub rate: f64,
    /// Fitted constant on the refined grid.
    pub constant: f64,
    /// Constant on the coarse grid at the same rate.
    pub coarse_constant: f64,
    /// Sample attaining the refined constant.
    pub worst: (f64, Vec<f64>, Vec<f64>),
    pub samples: usize,
    /// True when the constant moved by less than the factor 2 under one
    /// refinement for the reported rate.
    pub pass: bool,
}

/// Fit C over the rate grid; pass iff some rate is stable under refinement.
pub fn fit_gaussian_bound<K>(
    kernel: K,
    profile: &BoundProfile,
    grid: &SampleGrid,
) -> Result<BoundReport>
where
    K: Fn(f64, &[f64], &[f64]) -> Result<f64> + Sync,
{
    if profile.e_x.len() != grid.dim() || profile.e_y.len() != grid.dim() {
        return Err(Error::dimension(
            "profile exponents do not match the grid dimension".to_string(),
        ));
    }
    let coarse = evaluate_samples(&kernel, grid)?;
    let fine_grid = grid.refined();
    let fine = evaluate_samples(&kernel, &fine_grid)?;

    let constant_for = |rate: f64, data: &[(f64, Vec<f64>, Vec<f64>, f64)]| -> (f64, usize) {
        let mut worst = 0.0f64;
        let mut at = 0usize;
        for (i, (t, x, y, k)) in data.iter().enumerate() {
            let env = profile.envelope(rate, *t, x, y);
            if env > 0.0 {
                let ratio = k.abs() / env;
                if ratio > worst {
                    worst = ratio;
                    at = i;
                }
            }
        }
        (worst, at)
    };

    let mut chosen: Option<(f64, f64, f64, usize)> = None;
    let mut fallback: Option<(f64, f64, f64, usize)> = None;
    for &rate in RATE_GRID.iter() {
        let (c0, _) = constant_for(rate, &coarse);
        let (c1, at) = constant_for(rate, &fine);
        let stable = c0.is_finite() && c1.is_finite() && c0 > 0.0 && c1 <= 2.0 * c0;
        if stable && chosen.is_none() {
            chosen = Some((rate, c0, c1, at));
        }
        if fallback.is_none() || c1 < fallback.as_ref().unwrap().2 {
            fallback = Some((rate, c0, c1, at));
        }
    }
    let pass = chosen.is_some();
    let (rate, coarse_constant, constant, at) = chosen.or(fallback).unwrap();
    let worst = (fine[at].0, fine[at].1.clone(), fine[at].2.clone());
    Ok(BoundReport {
        profile: profile.clone(),
        rate,
        constant,
        coarse_constant,
        worst,
        samples: coarse.len() + fine.len(),
        pass,
    })
}

fn evaluate_samples<K>(
    kernel: &K,
    grid: &SampleGrid,
) -> Result<Vec<(f64, Vec<f64>, Vec<f64>, f64)>>
where
    K: Fn(f64, &[f64], &[f64]) -> Result<f64> + Sync,
{
    use rayon::prelude::*;
    let pts = grid.samples();
    pts.into_par_iter()
        .map(|(t, x, y)| {
            let v = kernel(t, &x, &y)?;
            Ok((t, x, y, v))
        })
        .collect()
}

/// Fit the improved odd-order profile
/// t^{-(k+1)/2} e^{-|x-y|^2/(ct)} (1 + sqrt(t)/x)^{-(nu+3/2)}
/// against delta^k p_t; defined for nu > -1/2 and odd k only.
pub fn verify_odd_improvement(nu: f64, k: usize, grid: &SampleGrid) -> Result<BoundReport> {
    if k % 2 == 0 {
        return Err(Error::domain(format!(
            "the improved estimate holds for odd k only, got k = {k}"
        )));
    }
    if !(nu > -0.5) {
        return Err(Error::domain(format!(
            "the improved estimate requires nu > -1/2, got {nu}"
        )));
    }
    let profile = BoundProfile::new_1d((k as f64 + 1.0) / 2.0, -(nu + 1.5), 0.0);
    fit_gaussian_bound(
        |t, x: &[f64], y: &[f64]| delta_k_heat_kernel_1d(nu, k, t, x[0], y[0]),
        &profile,
        grid,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::heat_kernel_1d;
    use crate::params::gamma_exponent;

    #[test]
    fn heat_kernel_profile_passes() {
        let grid = SampleGrid::default_1d();
        let profile = BoundProfile::new_1d(0.5, 0.0, 0.0);
        let report = fit_gaussian_bound(
            |t, x: &[f64], y: &[f64]| heat_kernel_1d(0.5, t, x[0], y[0]),
            &profile,
            &grid,
        )
        .unwrap();
        assert!(report.pass, "constant {} -> {}", report.coarse_constant, report.constant);
        assert!(report.constant.is_finite() && report.constant > 0.0);
        // the true Gaussian rate near t -> 0 is 4t, so c < 4 cannot be stable
        assert!(report.rate >= 4.0, "rate {} too small to dominate", report.rate);
    }

    #[test]
    fn first_derivative_profile_passes_with_boundary_factor() {
        let nu = -0.75;
        let grid = SampleGrid::default_1d();
        let profile = BoundProfile::new_1d(1.0, 0.0, gamma_exponent(nu));
        let report = fit_gaussian_bound(
            |t, x: &[f64], y: &[f64]| delta_k_heat_kernel_1d(nu, 1, t, x[0], y[0]),
            &profile,
            &grid,
        )
        .unwrap();
        assert!(report.pass, "constant {} -> {}", report.coarse_constant, report.constant);
    }

    #[test]
    fn wrong_profile_fails_under_refinement() {
        // dropping the (1 + sqrt t / y)^{gamma} factor for nu = -0.75 must
        // blow up toward y -> 0
        let nu = -0.75;
        let grid = SampleGrid::default_1d();
        let profile = BoundProfile::new_1d(1.0, 0.0, 0.0);
        let report = fit_gaussian_bound(
            |t, x: &[f64], y: &[f64]| delta_k_heat_kernel_1d(nu, 1, t, x[0], y[0]),
            &profile,
            &grid,
        )
        .unwrap();
        assert!(!report.pass, "negative control unexpectedly stable");
        assert!(report.constant >= 2.0 * report.coarse_constant);
    }

    #[test]
    fn odd_improvement_holds_and_even_control_fails() {
        let grid = SampleGrid::default_1d();
        let r1 = verify_odd_improvement(0.5, 1, &grid).unwrap();
        assert!(r1.pass);
        let r3 = verify_odd_improvement(0.5, 3, &grid).unwrap();
        assert!(r3.pass);
        // even k with the odd profile: the harness rejects even k by domain,
        // so the control is run through the raw fitter
        let profile = BoundProfile::new_1d(1.5, -(0.5 + 1.5), 0.0);
        let control = fit_gaussian_bound(
            |t, x: &[f64], y: &[f64]| delta_k_heat_kernel_1d(0.5, 2, t, x[0], y[0]),
            &profile,
            &grid,
        )
        .unwrap();
        assert!(!control.pass, "even-order control unexpectedly stable");
        assert!(verify_odd_improvement(0.5, 2, &grid).is_err());
        assert!(verify_odd_improvement(-0.6, 1, &grid).is_err());
    }
}

