//! Truncated spectral analysis and synthesis in the Laguerre basis, the
//! diagonal functional calculus (heat semigroup, negative powers), the exact
//! first-order Riesz matrices for k in {0,1}^n and the quadrature-based
//! Riesz kernel for general k.

use crate::error::{Error, Result};
use crate::kernels::DeltaExpansion;
use crate::params::{eigenvalue, MultiIndex, NuVector};
use crate::quad::HalfLineRule;
use crate::special::{gamma_fn, laguerre_basis_row};

/// Truncated coefficient array <f, phi_alpha^nu> over alpha_j <= cutoff,
/// tagged with its basis (nu, cutoff). Mixed-basis arithmetic is rejected.
#[derive(Clone, Debug)]
pub struct SpectralCoeffs {
    nu: NuVector,
    cutoff: usize,
    coeffs: Vec<f64>,
}

fn flat_len(dim: usize, cutoff: usize) -> usize {
    (cutoff + 1).pow(dim as u32)
}

/// Decode a flat index into per-axis degrees (row-major, axis 0 slowest).
fn decode(mut idx: usize, dim: usize, cutoff: usize) -> Vec<usize> {
    let base = cutoff + 1;
    let mut out = vec![0usize; dim];
    for d in (0..dim).rev() {
        out[d] = idx % base;
        idx /= base;
    }
    out
}

fn encode(degrees: &[usize], cutoff: usize) -> usize {
    let base = cutoff + 1;
    degrees.iter().fold(0usize, |acc, &d| acc * base + d)
}

impl SpectralCoeffs {
    pub fn new(nu: NuVector, cutoff: usize, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != flat_len(nu.dim(), cutoff) {
            return Err(Error::dimension(format!(
                "coefficient array has length {}, expected {}",
                coeffs.len(),
                flat_len(nu.dim(), cutoff)
            )));
        }
        Ok(SpectralCoeffs { nu, cutoff, coeffs })
    }

    pub fn zeros(nu: NuVector, cutoff: usize) -> Self {
        let len = flat_len(nu.dim(), cutoff);
        SpectralCoeffs {
            nu,
            cutoff,
            coeffs: vec![0.0; len],
        }
    }

    pub fn nu(&self) -> &NuVector {
        &self.nu
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn get(&self, alpha: &MultiIndex) -> Result<f64> {
        if alpha.dim() != self.nu.dim() {
            return Err(Error::dimension("index dimension does not match basis"));
        }
        if alpha.entries().iter().any(|&a| a > self.cutoff) {
            return Err(Error::Range(format!(
                "index beyond cutoff {}",
                self.cutoff
            )));
        }
        Ok(self.coeffs[encode(alpha.entries(), self.cutoff)])
    }

    pub fn set(&mut self, alpha: &MultiIndex, value: f64) -> Result<()> {
        if alpha.dim() != self.nu.dim() || alpha.entries().iter().any(|&a| a > self.cutoff) {
            return Err(Error::dimension("index outside coefficient array"));
        }
        self.coeffs[encode(alpha.entries(), self.cutoff)] = value;
        Ok(())
    }

    pub fn l2_norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    fn same_basis(&self, other: &SpectralCoeffs) -> Result<()> {
        if self.nu != other.nu || self.cutoff != other.cutoff {
            return Err(Error::BasisMismatch(format!(
                "bases differ: nu {:?} cutoff {} vs nu {:?} cutoff {}",
                self.nu.entries(),
                self.cutoff,
                other.nu.entries(),
                other.cutoff
            )));
        }
        Ok(())
    }

    /// <f, g> in coefficient space; rejects mixed bases.
    pub fn dot(&self, other: &SpectralCoeffs) -> Result<f64> {
        self.same_basis(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a * b)
            .sum())
    }
}

/// Per-axis quadrature request for `analyze`.
#[derive(Clone, Debug)]
pub struct QuadSpec {
    pub points: usize,
    /// Upper integration cutoff; derived from (nu, cutoff) when None.
    pub upper: Option<f64>,
}

impl Default for QuadSpec {
    fn default() -> Self {
        QuadSpec {
            points: 1024,
            upper: None,
        }
    }
}

fn axis_rule(nu: &NuVector, axis: usize, cutoff: usize, spec: &QuadSpec) -> Result<HalfLineRule> {
    let upper = spec
        .upper
        .unwrap_or_else(|| HalfLineRule::basis_upper(cutoff, nu.sum(), nu.dim()));
    // products of two basis functions behave like x^{2 nu_j + 1} at 0
    HalfLineRule::new(upper, 2.0 * nu.entries()[axis] + 1.0, spec.points)
}

/// Coefficients <f, phi_alpha^nu> for all alpha with alpha_j <= cutoff, via
/// tensorized quadrature: the grid evaluation of f is contracted one axis at
/// a time against the weighted basis-value matrices.
pub fn analyze<F: Fn(&[f64]) -> f64>(
    f: F,
    nu: &NuVector,
    cutoff: usize,
    spec: &QuadSpec,
) -> Result<SpectralCoeffs> {
    let n = nu.dim();
    let mut rules = Vec::with_capacity(n);
    for axis in 0..n {
        rules.push(axis_rule(nu, axis, cutoff, spec)?);
    }
    // weighted basis matrices per axis: B[i][a] = w_i phi_a(x_i)
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n);
    for (axis, rule) in rules.iter().enumerate() {
        let mut mat = vec![0.0; rule.len() * (cutoff + 1)];
        for (i, (&x, &w)) in rule.nodes.iter().zip(&rule.weights).enumerate() {
            let row = laguerre_basis_row(cutoff, nu.entries()[axis], x)?;
            for (a, v) in row.iter().enumerate() {
                mat[i * (cutoff + 1) + a] = w * v;
            }
        }
        basis.push(mat);
    }
    // evaluate f on the tensor grid
    let dims: Vec<usize> = rules.iter().map(|r| r.len()).collect();
    let total: usize = dims.iter().product();
    let mut values = Vec::with_capacity(total);
    let mut point = vec![0.0; n];
    for flat in 0..total {
        let mut rest = flat;
        for d in (0..n).rev() {
            point[d] = rules[d].nodes[rest % dims[d]];
            rest /= dims[d];
        }
        values.push(f(&point));
    }
    // contract axis by axis (axis 0 is the slowest-varying index)
    let mut current = values;
    let mut cur_dims = dims;
    for axis in 0..n {
        let rows = cur_dims[axis];
        let cols = cutoff + 1;
        let inner: usize = cur_dims[axis + 1..].iter().product();
        let outer: usize = cur_dims[..axis].iter().product::<usize>().max(1);
        let mut next = vec![0.0; outer * cols * inner];
        let mat = &basis[axis];
        for o in 0..outer {
            for i in 0..rows {
                let src = (o * rows + i) * inner;
                for a in 0..cols {
                    let b = mat[i * cols + a];
                    if b == 0.0 {
                        continue;
                    }
                    let dst = (o * cols + a) * inner;
                    for r in 0..inner {
                        next[dst + r] += b * current[src + r];
                    }
                }
            }
        }
        current = next;
        cur_dims[axis] = cols;
    }
    SpectralCoeffs::new(nu.clone(), cutoff, current)
}

/// One-dimensional convenience wrapper around `analyze`.
pub fn analyze_1d<F: Fn(f64) -> f64>(
    f: F,
    nu: f64,
    cutoff: usize,
    spec: &QuadSpec,
) -> Result<SpectralCoeffs> {
    analyze(|x: &[f64]| f(x[0]), &NuVector::scalar(nu)?, cutoff, spec)
}

/// Point evaluation sum_alpha c_alpha phi_alpha^nu(x).
pub fn synthesize(c: &SpectralCoeffs, x: &[f64]) -> Result<f64> {
    let n = c.nu.dim();
    if x.len() != n {
        return Err(Error::dimension("synthesize: point dimension mismatch"));
    }
    let mut rows = Vec::with_capacity(n);
    for axis in 0..n {
        rows.push(laguerre_basis_row(c.cutoff, c.nu.entries()[axis], x[axis])?);
    }
    let base = c.cutoff + 1;
    // contract from the last axis inward
    let mut current = c.coeffs.clone();
    for axis in (0..n).rev() {
        let outer = current.len() / base;
        let mut next = vec![0.0; outer];
        for o in 0..outer {
            let mut acc = 0.0;
            for a in 0..base {
                acc += current[o * base + a] * rows[axis][a];
            }
            next[o] = acc;
        }
        current = next;
    }
    Ok(current[0])
}

pub fn synthesize_1d(c: &SpectralCoeffs, x: f64) -> Result<f64> {
    synthesize(c, &[x])
}

/// Heat semigroup on coefficients: multiply c_alpha by e^{-t lambda_alpha}.
pub fn apply_heat(c: &SpectralCoeffs, t: f64) -> Result<SpectralCoeffs> {
    if !(t >= 0.0) {
        return Err(Error::domain(format!("apply_heat requires t >= 0, got {t}")));
    }
    Ok(diagonal_map(c, |lambda| (-t * lambda).exp()))
}

/// Negative power (lambda + a)^{-s} on coefficients.
pub fn apply_neg_power(c: &SpectralCoeffs, s: f64, a: f64) -> Result<SpectralCoeffs> {
    if !(s >= 0.0) || !(a >= 0.0) {
        return Err(Error::domain(format!(
            "apply_neg_power requires s >= 0 and a >= 0, got s={s}, a={a}"
        )));
    }
    Ok(diagonal_map(c, |lambda| (lambda + a).powf(-s)))
}

fn diagonal_map<F: Fn(f64) -> f64>(c: &SpectralCoeffs, factor: F) -> SpectralCoeffs {
    let n = c.nu.dim();
    let mut out = c.clone();
    for (idx, v) in out.coeffs.iter_mut().enumerate() {
        let degrees = decode(idx, n, c.cutoff);
        let alpha = MultiIndex::new(degrees).expect("decode produces nonempty");
        *v *= factor(eigenvalue(&c.nu, &alpha));
    }
    out
}

/// One entry of the exact first-order Riesz matrix.
#[derive(Clone, Debug)]
pub struct RieszEntry {
    pub source: MultiIndex,
    pub target: MultiIndex,
    pub coeff: f64,
}

/// Exact matrix of delta_nu^k L_nu^{-|k|/2} for k in {0,1}^n, mapping the
/// nu-basis into the (nu+k)-basis:
///   phi_alpha^nu -> -2^{|k|} sqrt(prod_{k_j=1} alpha_j)
///                   / (4|alpha| + 2|nu| + 2n)^{|k|/2} phi_{alpha-k}^{nu+k}.
/// Sources with alpha_j = 0 at a coordinate where k_j = 1 are annihilated.
#[derive(Clone, Debug)]
pub struct RieszMatrix01 {
    nu: NuVector,
    k: MultiIndex,
    cutoff: usize,
    entries: Vec<RieszEntry>,
}

impl RieszMatrix01 {
    pub fn new(nu: &NuVector, k: &MultiIndex, cutoff: usize) -> Result<Self> {
        if k.dim() != nu.dim() {
            return Err(Error::dimension("riesz matrix: k and nu dimensions differ"));
        }
        if !k.is_zero_one() {
            return Err(Error::domain(
                "the exact spectral matrix exists only for k in {0,1}^n".to_string(),
            ));
        }
        let n = nu.dim();
        let order = k.order() as i32;
        let mut entries = Vec::new();
        for idx in 0..flat_len(n, cutoff) {
            let degrees = decode(idx, n, cutoff);
            if degrees
                .iter()
                .zip(k.entries())
                .any(|(&a, &kj)| kj == 1 && a == 0)
            {
                continue; // bottom-mode convention: shifted function vanishes
            }
            let mut root = 1.0;
            for (a, &kj) in degrees.iter().zip(k.entries()) {
                if kj == 1 {
                    root *= *a as f64;
                }
            }
            let alpha = MultiIndex::new(degrees.clone())?;
            let lambda = eigenvalue(nu, &alpha);
            let coeff = -2.0f64.powi(order) * root.sqrt() / lambda.powf(order as f64 / 2.0);
            let target = MultiIndex::new(
                degrees
                    .iter()
                    .zip(k.entries())
                    .map(|(&a, &kj)| a - kj)
                    .collect(),
            )?;
            entries.push(RieszEntry {
                source: alpha,
                target,
                coeff,
            });
        }
        Ok(RieszMatrix01 {
            nu: nu.clone(),
            k: k.clone(),
            cutoff,
            entries,
        })
    }

    pub fn entries(&self) -> &[RieszEntry] {
        &self.entries
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Spectral norm of the truncated matrix. Distinct sources map to
    /// distinct targets, so the matrix has at most one nonzero per row and
    /// column and its operator norm is the largest |coefficient|.
    pub fn operator_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.coeff.abs())
            .fold(0.0, f64::max)
    }

    /// Apply to coefficients in the nu-basis, producing (nu+k)-coefficients.
    pub fn apply(&self, c: &SpectralCoeffs) -> Result<SpectralCoeffs> {
        if c.nu != self.nu || c.cutoff != self.cutoff {
            return Err(Error::BasisMismatch(
                "riesz matrix applied to a different basis".to_string(),
            ));
        }
        let target_nu = self.nu.shifted(&self.k)?;
        let mut out = SpectralCoeffs::zeros(target_nu, self.cutoff);
        for e in &self.entries {
            let v = c.get(&e.source)? * e.coeff;
            let cur = out.get(&e.target)?;
            out.set(&e.target, cur + v)?;
        }
        Ok(out)
    }

    /// Adjoint action: takes (nu+k)-coefficients back to the nu-basis.
    pub fn apply_adjoint(&self, c: &SpectralCoeffs) -> Result<SpectralCoeffs> {
        let target_nu = self.nu.shifted(&self.k)?;
        if *c.nu() != target_nu || c.cutoff != self.cutoff {
            return Err(Error::BasisMismatch(
                "riesz adjoint applied to a different basis".to_string(),
            ));
        }
        let mut out = SpectralCoeffs::zeros(self.nu.clone(), self.cutoff);
        for e in &self.entries {
            let v = c.get(&e.target)? * e.coeff;
            let cur = out.get(&e.source)?;
            out.set(&e.source, cur + v)?;
        }
        Ok(out)
    }
}

/// Quadrature schedule for the Riesz time integral.
#[derive(Clone, Debug)]
pub struct TimeQuadSpec {
    /// Relative stopping tolerance under panel doubling.
    pub rel_tol: f64,
    /// Gauss-Legendre points per panel.
    pub points_per_panel: usize,
    /// Panels per unit of the substituted variable at the first level.
    pub init_density: f64,
    pub max_doublings: usize,
    /// When false, integrate once at the initial density (used by the bulk
    /// assembly in the norm sweep, where the schedule must be identical for
    /// every matrix entry).
    pub adaptive: bool,
}

impl Default for TimeQuadSpec {
    fn default() -> Self {
        TimeQuadSpec {
            rel_tol: 1e-10,
            points_per_panel: 12,
            init_density: 1.0,
            max_doublings: 7,
            adaptive: true,
        }
    }
}

impl TimeQuadSpec {
    /// Fixed schedule used for matrix assembly: denser initial panels, no
    /// per-entry adaptivity, so the whole matrix shares one deterministic
    /// quadrature.
    pub fn fixed() -> Self {
        TimeQuadSpec {
            rel_tol: 1e-10,
            points_per_panel: 12,
            init_density: 2.0,
            max_doublings: 0,
            adaptive: false,
        }
    }
}

struct CoordinateExpansion {
    nu: f64,
    expansion: DeltaExpansion,
}

/// Integrand prod_j (delta^{k_j} p_t)(x_j, y_j) at time t.
fn delta_product(coords: &[CoordinateExpansion], t: f64, x: &[f64], y: &[f64]) -> Result<f64> {
    let mut prod = 1.0;
    for (j, c) in coords.iter().enumerate() {
        prod *= c.expansion.eval(c.nu, t, x[j], y[j])?;
        if prod == 0.0 {
            return Ok(0.0);
        }
    }
    Ok(prod)
}

/// Gauss-Legendre composite over [lo, hi] with `panels` panels.
fn composite<F: Fn(f64) -> f64>(lo: f64, hi: f64, panels: usize, pts: usize, f: &F) -> f64 {
    let (gx, gw) = crate::quad::gauss_legendre(pts);
    let h = (hi - lo) / panels as f64;
    let mut acc = 0.0;
    for p in 0..panels {
        let a = lo + p as f64 * h;
        for (xi, wi) in gx.iter().zip(&gw) {
            acc += 0.5 * h * wi * f(a + 0.5 * h * (xi + 1.0));
        }
    }
    acc
}

fn integrate_with_doubling<F: Fn(f64) -> f64>(
    lo: f64,
    hi: f64,
    init_panels: usize,
    spec: &TimeQuadSpec,
    f: &F,
) -> Result<f64> {
    if hi <= lo {
        return Ok(0.0);
    }
    let mut panels = init_panels.max(1);
    let mut value = composite(lo, hi, panels, spec.points_per_panel, f);
    if !spec.adaptive {
        return Ok(value);
    }
    for _ in 0..spec.max_doublings {
        panels *= 2;
        let next = composite(lo, hi, panels, spec.points_per_panel, f);
        let diff = (next - value).abs();
        value = next;
        if diff <= spec.rel_tol * value.abs().max(1e-300) {
            return Ok(value);
        }
    }
    Err(Error::Convergence(format!(
        "riesz time quadrature did not stabilize on [{lo}, {hi}]"
    )))
}

/// Riesz transform kernel
///   (1/Gamma(|k|/2)) int_0^inf t^{|k|/2} delta_nu^k p_t^nu(x,y) dt/t,
/// split at t = |x-y|^2: t = u^2 below (Gaussian factor kills the origin),
/// t = e^v above (spectral gap kills the far end).
pub fn riesz_kernel(
    nu: &NuVector,
    k: &MultiIndex,
    x: &[f64],
    y: &[f64],
    spec: &TimeQuadSpec,
) -> Result<f64> {
    let n = nu.dim();
    if k.dim() != n || x.len() != n || y.len() != n {
        return Err(Error::dimension("riesz_kernel: dimension mismatch"));
    }
    if k.order() == 0 {
        return Err(Error::domain(
            "riesz_kernel requires |k| >= 1; k = 0 is the identity".to_string(),
        ));
    }
    let d2: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    if d2 == 0.0 {
        return Err(Error::Singularity(
            "riesz kernel evaluated on the diagonal x = y".to_string(),
        ));
    }
    let coords: Vec<CoordinateExpansion> = (0..n)
        .map(|j| CoordinateExpansion {
            nu: nu.entries()[j],
            expansion: DeltaExpansion::new(k.entries()[j], 0),
        })
        .collect();
    let kappa = k.order() as f64 / 2.0;

    // slowest large-t decay: e^{-t chi}, chi = sum_j (2 nu_j + 2 + [k_j >= 1] 4)
    let chi: f64 = nu
        .entries()
        .iter()
        .zip(k.entries())
        .map(|(&v, &kj)| 2.0 * v + 2.0 + if kj >= 1 { 4.0 } else { 0.0 })
        .sum();
    let t_max = (60.0 / chi).max(25.0);
    let split = d2.min(t_max);

    // lower piece, t = u^2: int_0^{sqrt(split)} 2 u^{2 kappa - 1} G(u^2) du
    let u_hi = split.sqrt();
    let lower_panels = ((spec.init_density * 8.0).ceil() as usize).max(2);
    let lower = integrate_with_doubling(0.0, u_hi, lower_panels, spec, &|u: f64| {
        if u == 0.0 {
            return 0.0;
        }
        let t = u * u;
        2.0 * u.powf(2.0 * kappa - 1.0) * delta_product(&coords, t, x, y).unwrap_or(0.0)
    })?;

    // upper piece, t = e^v on [split, t_max]
    let v_lo = split.ln();
    let v_hi = t_max.ln();
    let upper = if v_hi > v_lo {
        let panels = ((v_hi - v_lo) * spec.init_density).ceil() as usize + 1;
        integrate_with_doubling(v_lo, v_hi, panels, spec, &|v: f64| {
            let t = v.exp();
            t.powf(kappa) * delta_product(&coords, t, x, y).unwrap_or(0.0)
        })?
    } else {
        0.0
    };

    Ok((lower + upper) / gamma_fn(kappa)?)
}

/// Which representation `riesz_apply_1d` uses.
#[derive(Clone, Debug)]
pub enum RieszPath {
    /// Exact spectral matrix; requires k in {0,1}.
    Spectral01 { cutoff: usize, quad: QuadSpec },
    /// Principal-value kernel quadrature, any k >= 1.
    KernelQuadrature {
        time_quad: TimeQuadSpec,
        /// Upper truncation of the y-integral.
        y_max: f64,
        /// Boundary exponent passed to the graded y-rules (the kernel behaves
        /// like y^{nu+1/2} at 0).
        points: usize,
    },
}

/// Apply the Riesz transform of order k to a one-dimensional function,
/// evaluated at `eval` points.
///
/// The kernel path integrates K(x, .) f against a symmetric window around
/// the diagonal: on (x - w, x + w) the integrand is folded as
/// K(x, x+u) f(x+u) + K(x, x-u) f(x-u), which cancels the principal-value
/// singularity analytically; the remaining pieces are regular.
pub fn riesz_apply_1d<F: Fn(f64) -> f64 + Sync>(
    f: F,
    eval: &[f64],
    nu: f64,
    k: usize,
    path: &RieszPath,
) -> Result<Vec<f64>> {
    match path {
        RieszPath::Spectral01 { cutoff, quad } => {
            if k > 1 {
                return Err(Error::domain(
                    "spectral path requires k in {0,1}".to_string(),
                ));
            }
            let nuv = NuVector::scalar(nu)?;
            let c = analyze(|x: &[f64]| f(x[0]), &nuv, *cutoff, quad)?;
            if k == 0 {
                return eval.iter().map(|&x| synthesize(&c, &[x])).collect();
            }
            let mat = RieszMatrix01::new(&nuv, &MultiIndex::scalar(1)?, *cutoff)?;
            let mapped = mat.apply(&c)?;
            eval.iter().map(|&x| synthesize(&mapped, &[x])).collect()
        }
        RieszPath::KernelQuadrature {
            time_quad,
            y_max,
            points,
        } => {
            if k == 0 {
                return Ok(eval.iter().map(|&x| f(x)).collect());
            }
            let nuv = NuVector::scalar(nu)?;
            let ki = MultiIndex::scalar(k)?;
            let kern = |x: f64, y: f64| -> Result<f64> {
                riesz_kernel(&nuv, &ki, &[x], &[y], time_quad)
            };
            use rayon::prelude::*;
            eval.par_iter()
                .map(|&x| {
                    let w = 0.5 * x;
                    // symmetric fold over (x-w, x+w); the two sides cancel a
                    // 1/u pole, so they are dropped together or not at all,
                    // and below u_floor the O(log u) remainder is truncated
                    // (mass ~ u_floor log(1/u_floor))
                    let u_floor = 1e-7 * (1.0 + x);
                    let folded = |u: f64| -> f64 {
                        if u <= u_floor {
                            return 0.0;
                        }
                        match (kern(x, x + u), kern(x, x - u)) {
                            (Ok(a), Ok(b)) => a * f(x + u) + b * f(x - u),
                            _ => 0.0,
                        }
                    };
                    let rule = HalfLineRule::new(w, 0.0, *points)?;
                    let near = rule.integrate(folded);
                    // left tail (0, x - w]
                    let left_rule = HalfLineRule::new(x - w, nu + 0.5, *points)?;
                    let left = left_rule.integrate(|y| kern(x, y).unwrap_or(0.0) * f(y));
                    // right tail [x + w, y_max]: panel widths grow with the
                    // distance from x, matching the kernel's 1/(y-x) scaling
                    let mut right = 0.0;
                    if *y_max > x + w {
                        let sub = (points / 48).max(2);
                        let mut lo = x + w;
                        let mut width = w;
                        while lo < *y_max {
                            let hi = (lo + width).min(*y_max);
                            right += composite(lo, hi, sub, 12, &|y| {
                                kern(x, y).unwrap_or(0.0) * f(y)
                            });
                            lo = hi;
                            width *= 2.0;
                        }
                    }
                    Ok(near + left + right)
                })
                .collect()
        }
    }
}
