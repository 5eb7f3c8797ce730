//! Muckenhoupt and reverse-Holder machinery: exact characterizations for
//! power weights, numerical constants for sampled weights over a dyadic ball
//! family, the L^r maximal function, and the composite weight condition that
//! the boundedness theorem imposes.

use crate::error::{Error, Result};
use crate::params::{gamma_nu, p_range, sigma_of_k, MultiIndex, NuVector};

/// Power weight membership w(x) = |x|^alpha in A_p: -n < alpha < n(p-1).
pub fn in_ap_power(alpha: f64, p: f64, n: usize) -> Result<bool> {
    if !(p > 1.0) {
        return Err(Error::domain(format!(
            "A_p characterization requires p > 1, got {p}"
        )));
    }
    let nf = n as f64;
    Ok(-nf < alpha && alpha < nf * (p - 1.0))
}

/// Power weight membership in RH_q: alpha * q > -n.
pub fn in_rhq_power(alpha: f64, q: f64, n: usize) -> Result<bool> {
    if !(q > 1.0) {
        return Err(Error::domain(format!(
            "RH_q characterization requires q > 1, got {q}"
        )));
    }
    Ok(alpha * q > -(n as f64))
}

/// RH_infinity for power weights: alpha >= 0.
///
/// The finite-q characterization does not cover q = infinity; this endpoint
/// rule (the weight is bounded above by its ball averages exactly when it is
/// nondecreasing in |x|) is a documented extension of it.
pub fn in_rh_inf_power(alpha: f64) -> bool {
    alpha >= 0.0
}

/// The weight test of the boundedness theorem at a given (nu, k, p, alpha).
#[derive(Clone, Debug)]
pub struct WeightConditionQuery {
    pub nu: NuVector,
    pub k: MultiIndex,
    pub p: f64,
    /// Exponent of the power weight w(x) = |x|^alpha.
    pub alpha: f64,
}

/// Evaluates w in A_{p(1-gamma_nu)} and w in RH_{(1/(p gamma_{nu+sigma(k)}))'}
/// for the power weight x^alpha. A zero gamma on the RH side makes that
/// constraint vacuous (the conjugate index degenerates to 1). Returns a
/// `Range` error, distinct from `false`, when p lies outside the admissible
/// open interval.
pub fn theorem_weight_condition(q: &WeightConditionQuery) -> Result<bool> {
    let (lo, hi) = p_range(&q.nu, &q.k)?;
    if !(q.p > lo && q.p < hi) {
        return Err(Error::Range(format!(
            "p = {} outside the admissible interval ({lo}, {hi})",
            q.p
        )));
    }
    let n = q.nu.dim();
    let g_lo = gamma_nu(&q.nu).max;
    let ap_index = q.p * (1.0 - g_lo);
    if !in_ap_power(q.alpha, ap_index, n)? {
        return Ok(false);
    }
    let shifted = q.nu.shifted(&sigma_of_k(&q.k))?;
    let g_hi = gamma_nu(&shifted).max;
    if g_hi == 0.0 {
        return Ok(true); // RH constraint vacuous under the 1/0 = inf convention
    }
    let s = 1.0 / (q.p * g_hi); // s > 1 inside the admissible range
    let rh_index = s / (s - 1.0);
    in_rhq_power(q.alpha, rh_index, n)
}

/// A positive function sampled on a uniform grid over [lo, hi].
#[derive(Clone, Debug)]
pub struct GridFn1d {
    pub lo: f64,
    pub hi: f64,
    pub values: Vec<f64>,
}

impl GridFn1d {
    pub fn from_fn<F: Fn(f64) -> f64>(lo: f64, hi: f64, n: usize, f: F) -> Result<Self> {
        if !(hi > lo) || n < 2 {
            return Err(Error::domain(
                "grid requires hi > lo and at least two samples".to_string(),
            ));
        }
        let values = (0..n).map(|i| f(Self::node(lo, hi, n, i))).collect();
        Ok(GridFn1d { lo, hi, values })
    }

    fn node(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
        // cell midpoints, so 0 is never sampled even when lo = 0
        lo + (hi - lo) * (i as f64 + 0.5) / n as f64
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.values.len())
            .map(|i| Self::node(self.lo, self.hi, self.values.len(), i))
            .collect()
    }

    /// Indices of samples inside (c - r, c + r), intersected with the box.
    fn ball_indices(&self, center: f64, radius: f64) -> std::ops::Range<usize> {
        let n = self.values.len() as f64;
        let to_idx = |x: f64| ((x - self.lo) / (self.hi - self.lo) * n - 0.5).ceil().max(0.0);
        let from = to_idx(center - radius) as usize;
        let to = (to_idx(center + radius) as usize).min(self.values.len());
        from..to.max(from)
    }
}

/// Dyadic centers x dyadic radii over a box, intersected with (0, inf).
#[derive(Clone, Debug)]
pub struct BallFamily {
    pub box_lo: f64,
    pub box_hi: f64,
    /// Radii run over (hi - lo) 2^{-j}, j = 0..=max_level; centers over the
    /// dyadic points at each level.
    pub max_level: u32,
}

impl BallFamily {
    pub fn new(box_lo: f64, box_hi: f64, max_level: u32) -> Result<Self> {
        if !(box_hi > box_lo) {
            return Err(Error::domain("ball family requires hi > lo".to_string()));
        }
        Ok(BallFamily {
            box_lo,
            box_hi,
            max_level,
        })
    }

    pub fn refined(&self) -> BallFamily {
        BallFamily {
            box_lo: self.box_lo,
            box_hi: self.box_hi,
            max_level: self.max_level + 1,
        }
    }

    fn for_each_ball<F: FnMut(f64, f64)>(&self, mut visit: F) {
        let span = self.box_hi - self.box_lo;
        for level in 0..=self.max_level {
            let radius = span * 0.5f64.powi(level as i32);
            let step = radius; // centers at dyadic points of the level
            let count = (1u64 << level) + 1;
            for i in 0..count {
                let center = self.box_lo + step * i as f64;
                visit(center, radius);
            }
        }
    }
}

/// Largest A_p product over the ball family, computed from grid samples:
///   (avg_B w) (avg_B w^{-1/(p-1)})^{p-1}        for p > 1,
///   (avg_B w) / min_B w                          for p = 1,
/// where averages are discrete cell averages over samples inside the ball
/// intersected with (0, inf). The p = 1 form replaces the essential infimum
/// by the grid minimum, so it lower-bounds the true constant.
pub fn ap_constant_estimate(w: &GridFn1d, p: f64, family: &BallFamily) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::domain(format!("A_p constant requires p >= 1, got {p}")));
    }
    if let Some(bad) = w.values.iter().find(|v| !(**v > 0.0)) {
        return Err(Error::domain(format!(
            "weight samples must be positive, got {bad}"
        )));
    }
    let mut worst: f64 = 0.0;
    family.for_each_ball(|center, radius| {
        let range = w.ball_indices(center, radius);
        let count = range.len();
        if count < 2 {
            return;
        }
        let slice = &w.values[range];
        let avg = slice.iter().sum::<f64>() / count as f64;
        let product = if p > 1.0 {
            let dual = slice
                .iter()
                .map(|v| v.powf(-1.0 / (p - 1.0)))
                .sum::<f64>()
                / count as f64;
            avg * dual.powf(p - 1.0)
        } else {
            let min = slice.iter().copied().fold(f64::INFINITY, f64::min);
            avg / min
        };
        if product > worst {
            worst = product;
        }
    });
    Ok(worst)
}

/// Discrete L^r maximal function over the dyadic interval family of the
/// grid box: at each sample, the sup of (avg_B |f|^r)^{1/r} over family
/// balls containing it.
pub fn maximal_fn(f: &GridFn1d, r: f64, max_level: u32) -> Result<GridFn1d> {
    if !(r > 0.0) {
        return Err(Error::domain(format!("maximal function requires r > 0, got {r}")));
    }
    let powed: Vec<f64> = f.values.iter().map(|v| v.abs().powf(r)).collect();
    // prefix sums for O(1) window averages
    let mut prefix = vec![0.0; powed.len() + 1];
    for (i, v) in powed.iter().enumerate() {
        prefix[i + 1] = prefix[i] + v;
    }
    // extend the family down to single-cell balls so the sup dominates |f|
    let cells = f.values.len() as f64;
    let depth = (2.0 * cells).log2().ceil() as u32;
    let family = BallFamily::new(f.lo, f.hi, max_level.max(depth))?;
    let mut out = vec![0.0f64; f.values.len()];
    let xs = f.xs();
    family.for_each_ball(|center, radius| {
        let range = f.ball_indices(center, radius);
        if range.is_empty() {
            return;
        }
        let avg = (prefix[range.end] - prefix[range.start]) / range.len() as f64;
        let value = avg.powf(1.0 / r);
        for i in range {
            if xs[i] > center - radius && xs[i] < center + radius && value > out[i] {
                out[i] = value;
            }
        }
    });
    Ok(GridFn1d {
        lo: f.lo,
        hi: f.hi,
        values: out,
    })
}

/// Verdict of an A_p estimate under one family refinement: an estimate that
/// grows by more than `growth_factor` is tagged unstable.
pub fn ap_estimate_is_stable(
    w: &GridFn1d,
    refined_w: &GridFn1d,
    p: f64,
    family: &BallFamily,
    growth_factor: f64,
) -> Result<bool> {
    let coarse = ap_constant_estimate(w, p, family)?;
    let fine = ap_constant_estimate(refined_w, p, &family.refined())?;
    Ok(fine <= growth_factor * coarse)
}
