//! Discrete operators on graded grids and L^p -> L^q norm estimation by
//! dual-map power iteration.
//!
//! The norm estimator is Boyd's fixed-point scheme: alternate T with its
//! measure-adjoint through the duality maps J_p, and track the largest
//! Rayleigh-type ratio; deterministic probe vectors (unit bumps at the
//! deepest cells, power profiles) are folded into the estimate so boundary
//! divergences register even when the iteration converges elsewhere. The
//! result is a lower bound of the true discrete norm computed by an
//! identical procedure at every refinement level, which is what the
//! stable/growing verdicts compare.

/// Grid on (0, x_max] with constant logarithmic density; larger point counts
/// extend the grid toward 0 (x_min = x_max 2^{-(n-1) * octave_step}).
#[derive(Clone, Debug)]
pub struct GradedGrid {
    pub x: Vec<f64>,
    pub cell: Vec<f64>,
}

impl GradedGrid {
    pub fn deepening(n: usize, x_max: f64, octave_step: f64) -> GradedGrid {
        assert!(n >= 2 && x_max > 0.0 && octave_step > 0.0);
        let ln2 = std::f64::consts::LN_2;
        let x: Vec<f64> = (0..n)
            .map(|i| x_max * (-(octave_step * (n - 1 - i) as f64) * ln2).exp())
            .collect();
        let half = 0.5 * octave_step * ln2;
        let width = (half.exp() - (-half).exp()) / 1.0;
        let cell = x.iter().map(|xi| xi * width).collect();
        GradedGrid { x, cell }
    }

    /// Two-zone grid: a log-uniform bulk [x_bulk, x_max] holding three
    /// quarters of the points at fine density, and a log-uniform deep tail
    /// reaching down to x_bulk 2^{-n/16} with the rest. The bulk density
    /// sharpens as n grows (diagonal resolution), while the tail depth grows
    /// by an octave per 16 points, so boundary-driven divergences keep
    /// feeding the norms at every refinement but convergent boundary mass
    /// saturates early. The tail density (4 points per octave) is fine
    /// enough that its discretization overshoot stays inside the 5 percent
    /// contraction budget at p = 2.
    pub fn two_zone(n: usize, x_max: f64, x_bulk: f64) -> GradedGrid {
        assert!(n >= 16 && x_max > x_bulk && x_bulk > 0.0);
        let n_bulk = (3 * n) / 4;
        let n_deep = n - n_bulk;
        let ln2 = std::f64::consts::LN_2;
        let mut x = Vec::with_capacity(n);
        let mut cell = Vec::with_capacity(n);
        // deep zone: [x_bulk 2^{-n/16}, x_bulk), log-uniform
        let deep_octaves = n as f64 / 16.0;
        let step_d = deep_octaves * ln2 / n_deep as f64;
        let ln_bulk = x_bulk.ln();
        for i in 0..n_deep {
            let lx = ln_bulk - step_d * (n_deep - i) as f64;
            let xi = lx.exp();
            x.push(xi);
            cell.push(xi * ((0.5 * step_d).exp() - (-0.5 * step_d).exp()));
        }
        // bulk zone: [x_bulk, x_max], log-uniform
        let step_b = (x_max / x_bulk).ln() / n_bulk as f64;
        for i in 0..n_bulk {
            let lx = ln_bulk + step_b * (i as f64 + 0.5);
            let xi = lx.exp();
            x.push(xi);
            cell.push(xi * ((0.5 * step_b).exp() - (-0.5 * step_b).exp()));
        }
        GradedGrid { x, cell }
    }

    /// Uniform grid on [lo, hi] (used for localized balls and annuli).
    pub fn uniform(n: usize, lo: f64, hi: f64) -> GradedGrid {
        assert!(n >= 1 && hi > lo);
        let h = (hi - lo) / n as f64;
        let x = (0..n).map(|i| lo + (i as f64 + 0.5) * h).collect();
        GradedGrid {
            x,
            cell: vec![h; n],
        }
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }
}

/// Dense kernel matrix with input quadrature cells folded in at apply time.
#[derive(Clone, Debug)]
pub struct DiscreteOp {
    /// Row-major kernel values, rows = output points, cols = input points.
    pub kernel: Vec<f64>,
    pub rows: usize,
    pub cols: usize,
    /// Input quadrature cells q_j: (Tf)_i = sum_j K_ij q_j f_j.
    pub in_cell: Vec<f64>,
}

impl DiscreteOp {
    pub fn from_kernel<F: Fn(f64, f64) -> f64 + Sync>(
        out: &GradedGrid,
        inp: &GradedGrid,
        f: F,
    ) -> DiscreteOp {
        use rayon::prelude::*;
        let cols = inp.len();
        let f = &f;
        let kernel: Vec<f64> = out
            .x
            .par_iter()
            .flat_map_iter(|&xi| inp.x.iter().map(move |&yj| f(xi, yj)))
            .collect();
        DiscreteOp {
            kernel,
            rows: out.len(),
            cols,
            in_cell: inp.cell.clone(),
        }
    }

    pub fn apply(&self, f: &[f64], out: &mut [f64]) {
        for i in 0..self.rows {
            let row = &self.kernel[i * self.cols..(i + 1) * self.cols];
            let mut acc = 0.0;
            for j in 0..self.cols {
                acc += row[j] * self.in_cell[j] * f[j];
            }
            out[i] = acc;
        }
    }

    /// Adjoint with respect to the weighted pairings <f,g> = sum f g m:
    /// (T* u)_j = (q_j / m_in_j) sum_i K_ij u_i m_out_i.
    pub fn apply_adjoint(&self, u: &[f64], m_out: &[f64], m_in: &[f64], out: &mut [f64]) {
        for v in out.iter_mut() {
            *v = 0.0;
        }
        for i in 0..self.rows {
            let row = &self.kernel[i * self.cols..(i + 1) * self.cols];
            let ui = u[i] * m_out[i];
            if ui == 0.0 {
                continue;
            }
            for j in 0..self.cols {
                out[j] += row[j] * ui;
            }
        }
        for j in 0..self.cols {
            out[j] *= self.in_cell[j] / m_in[j];
        }
    }
}

pub fn lp_norm(f: &[f64], measure: &[f64], p: f64) -> f64 {
    f.iter()
        .zip(measure)
        .map(|(v, m)| v.abs().powf(p) * m)
        .sum::<f64>()
        .powf(1.0 / p)
}

/// Duality map: J_p(g) proportional to sign(g) |g|^{p-1}, normalized in sup.
fn duality_map(g: &[f64], p: f64, out: &mut [f64]) {
    let scale = g.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if scale == 0.0 {
        out.iter_mut().for_each(|v| *v = 0.0);
        return;
    }
    for (o, v) in out.iter_mut().zip(g) {
        *o = v.signum() * (v.abs() / scale).powf(p - 1.0);
    }
}

/// Estimate the L^p(m_in) -> L^q(m_out) norm of T.
pub fn norm_p_to_q(
    op: &DiscreteOp,
    m_in: &[f64],
    m_out: &[f64],
    p: f64,
    q: f64,
    max_iters: usize,
    probes: &[Vec<f64>],
) -> f64 {
    let mut best: f64 = 0.0;
    let mut g = vec![0.0; op.rows];
    let ratio = |f: &[f64], g: &mut Vec<f64>| -> f64 {
        let nf = lp_norm(f, m_in, p);
        if nf == 0.0 || !nf.is_finite() {
            return 0.0;
        }
        let mut out = vec![0.0; op.rows];
        op.apply(f, &mut out);
        *g = out;
        lp_norm(g, m_out, q) / nf
    };

    for probe in probes {
        let r = ratio(probe, &mut g);
        if r.is_finite() && r > best {
            best = r;
        }
    }

    let mut f = vec![1.0; op.cols];
    let mut u = vec![0.0; op.rows];
    let mut h = vec![0.0; op.cols];
    let pp = p / (p - 1.0);
    let mut last = 0.0;
    for _ in 0..max_iters {
        let r = ratio(&f, &mut g);
        if !r.is_finite() {
            break;
        }
        if r > best {
            best = r;
        }
        if (r - last).abs() <= 1e-4 * r.max(1e-300) {
            break;
        }
        last = r;
        duality_map(&g, q, &mut u);
        op.apply_adjoint(&u, m_out, m_in, &mut h);
        duality_map(&h, pp, &mut f);
        let scale = f.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if scale == 0.0 {
            break;
        }
        f.iter_mut().for_each(|v| *v /= scale);
    }
    best
}

/// Error function by the Abramowitz-Stegun rational approximation
/// (absolute error below 1.6e-7; plenty for discrete norm estimates).
pub(crate) fn erf(x: f64) -> f64 {
    let sign = x.signum();
    let x = x.abs();
    let t = 1.0 / (1.0 + 0.3275911 * x);
    let poly = t
        * (0.254829592
            + t * (-0.284496736 + t * (1.421413741 + t * (-1.453152027 + t * 1.061405429))));
    sign * (1.0 - poly * (-x * x).exp())
}

/// Cell-averaged Gaussian kernel entry
///   (1/cell) int_{y-cell/2}^{y+cell/2} t^{-1/2} e^{-(x-u)^2/(c t)} du,
/// falling back to the midpoint value when the cell is narrow relative to
/// the Gaussian width (where the erf difference would cancel to noise and
/// the midpoint value is already exact to O(cell^2)).
pub(crate) fn gaussian_cell_average(t: f64, rate: f64, x: f64, y: f64, cell: f64) -> f64 {
    let width = (rate * t).sqrt();
    if cell < 0.25 * width {
        return (-((x - y) * (x - y)) / (rate * t)).exp() / t.sqrt();
    }
    let a = (x - (y - 0.5 * cell)) / width;
    let b = (x - (y + 0.5 * cell)) / width;
    (std::f64::consts::PI * rate).sqrt() / (2.0 * cell) * (erf(a) - erf(b))
}

/// Standard probe family for boundary-divergence detection on a graded grid:
/// unit bumps at the deepest cells and power profiles x^{-s}.
pub fn boundary_probes(grid: &GradedGrid, p: f64) -> Vec<Vec<f64>> {
    let n = grid.len();
    let mut probes = Vec::new();
    for idx in [0usize, 1, n / 2, n - 1] {
        let mut e = vec![0.0; n];
        e[idx.min(n - 1)] = 1.0;
        probes.push(e);
    }
    for s in [0.5 / p, 0.9 / p] {
        probes.push(grid.x.iter().map(|x| x.powf(-s).min(1e200)).collect());
    }
    probes.push(vec![1.0; n]);
    probes
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn deepening_grid_reaches_down() {
        let g = GradedGrid::deepening(256, 16.0, 1.0 / 32.0);
        assert_relative_eq!(g.x[255], 16.0, max_relative = 1e-12);
        assert_relative_eq!(g.x[0], 16.0 * 2.0f64.powf(-255.0 / 32.0), max_relative = 1e-12);
        // constant log density: cells proportional to x
        assert_relative_eq!(g.cell[10] / g.x[10], g.cell[200] / g.x[200], max_relative = 1e-12);
    }

    #[test]
    fn norm_of_rank_one_operator() {
        // K(x, y) = a(x) b(y): ||T||_{p->p} = ||a||_p ||b||_{p'}
        let grid = GradedGrid::uniform(400, 0.0, 1.0);
        let op = DiscreteOp::from_kernel(&grid, &grid, |x, y| (2.0 * x) * (1.0 + y));
        let m = grid.cell.clone();
        let p = 2.5;
        let pp = p / (p - 1.0);
        let probes = boundary_probes(&grid, p);
        let got = norm_p_to_q(&op, &m, &m, p, p, 60, &probes);
        let na = lp_norm(&grid.x.iter().map(|x| 2.0 * x).collect::<Vec<_>>(), &m, p);
        let nb = lp_norm(&grid.x.iter().map(|y| 1.0 + y).collect::<Vec<_>>(), &m, pp);
        assert_relative_eq!(got, na * nb, max_relative = 1e-3);
    }

    #[test]
    fn p2_matches_singular_value() {
        // symmetric two-point operator: norm at p = 2 is the spectral radius
        let grid = GradedGrid::uniform(2, 0.0, 2.0);
        let op = DiscreteOp::from_kernel(&grid, &grid, |x, y| x + y);
        let m = grid.cell.clone();
        let probes = boundary_probes(&grid, 2.0);
        let got = norm_p_to_q(&op, &m, &m, 2.0, 2.0, 60, &probes);
        // matrix entries K q with q = 1: eigenvalues of [[1,2],[2,3]]... built
        // from x = {0.5, 1.5}: K = [[1,2],[2,3]], top eigenvalue 2 + sqrt(5)
        assert_relative_eq!(got, 2.0 + 5.0f64.sqrt(), max_relative = 1e-6);
    }
}
