//! Off-diagonal decay of the boundary-factor Gaussian family: discrete
//! L^p(B) -> L^q(S_j(B)) norms must fall consistently with the factor
//! exp(-(2^j r_B)^2 / (c t)) across annuli, and the on-diagonal p -> p norms
//! must stay O(1) uniformly in t.

use super::opnorm::{norm_p_to_q, DiscreteOp, GradedGrid};
use super::{CheckRow, SuiteReport};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct OffdiagConfig {
    pub beta: f64,
    pub sigma: f64,
    pub p: f64,
    pub q: f64,
    pub ball_center: f64,
    pub ball_radius: f64,
    pub t: f64,
    /// Annulus indices S_j(B), j >= 2.
    pub js: Vec<u32>,
    /// Gaussian rate in the kernel (fixed; the fitted rate is an output).
    pub rate: f64,
    pub points_per_unit: usize,
}

impl Default for OffdiagConfig {
    fn default() -> Self {
        OffdiagConfig {
            beta: 0.25,
            sigma: 0.25,
            p: 2.0,
            q: 2.0,
            ball_center: 2.0,
            ball_radius: 1.0,
            t: 0.25,
            js: vec![2, 3, 4, 5, 6],
            rate: 1.0,
            points_per_unit: 48,
        }
    }
}

fn t_kernel(cfg: &OffdiagConfig, t: f64, x: f64, y: f64) -> f64 {
    let st = t.sqrt();
    (-((x - y) * (x - y)) / (cfg.rate * t)).exp() / st
        * (1.0 + st / x).powf(cfg.beta)
        * (1.0 + st / y).powf(cfg.sigma)
}

/// Grid over a segment intersected with (0, inf); empty when degenerate.
fn segment_grid(lo: f64, hi: f64, per_unit: usize) -> Option<GradedGrid> {
    let lo = lo.max(1e-6);
    if hi <= lo {
        return None;
    }
    let n = (((hi - lo) * per_unit as f64).ceil() as usize).max(8);
    Some(GradedGrid::uniform(n, lo, hi))
}

/// Annulus S_j(B) = 2^j B \ 2^{j-1} B intersected with (0, inf): up to two
/// segments.
fn annulus_grids(cfg: &OffdiagConfig, j: u32) -> Vec<GradedGrid> {
    let r_out = cfg.ball_radius * 2f64.powi(j as i32);
    let r_in = cfg.ball_radius * 2f64.powi(j as i32 - 1);
    let mut out = Vec::new();
    if let Some(g) = segment_grid(
        cfg.ball_center - r_out,
        cfg.ball_center - r_in,
        cfg.points_per_unit,
    ) {
        out.push(g);
    }
    if let Some(g) = segment_grid(
        cfg.ball_center + r_in,
        cfg.ball_center + r_out,
        cfg.points_per_unit,
    ) {
        out.push(g);
    }
    out
}

fn ball_to_region_norm(cfg: &OffdiagConfig, t: f64, region: &[GradedGrid]) -> f64 {
    let ball = segment_grid(
        cfg.ball_center - cfg.ball_radius,
        cfg.ball_center + cfg.ball_radius,
        cfg.points_per_unit,
    )
    .expect("ball is nondegenerate");
    let mut total_q = 0.0f64;
    // combine segments into one output grid
    let mut xs = Vec::new();
    let mut cells = Vec::new();
    for g in region {
        xs.extend_from_slice(&g.x);
        cells.extend_from_slice(&g.cell);
    }
    if xs.is_empty() {
        return 0.0;
    }
    let out_grid = GradedGrid {
        x: xs,
        cell: cells,
    };
    let op = DiscreteOp::from_kernel(&out_grid, &ball, |x, y| t_kernel(cfg, t, x, y));
    // averaged norms: the estimate compares cell-average L^p norms, so the
    // measures are plain cells (Lebesgue)
    let m_in = ball.cell.clone();
    let m_out = out_grid.cell.clone();
    let probes: Vec<Vec<f64>> = vec![vec![1.0; ball.len()], {
        let mut e = vec![0.0; ball.len()];
        e[ball.len() / 2] = 1.0;
        e
    }];
    total_q += norm_p_to_q(&op, &m_in, &m_out, cfg.p, cfg.q, 40, &probes);
    total_q
}

/// Norms across the annuli: monotone decay, a stable fitted Gaussian rate on
/// consecutive pairs above the floating-point floor, and bounded on-diagonal
/// p -> p norms across a t-sweep.
pub fn verify_offdiagonal(cfg: &OffdiagConfig) -> Result<SuiteReport> {
    if !(cfg.sigma >= 0.0 && cfg.sigma < 0.5 && cfg.beta >= 0.0 && cfg.beta < 0.5) {
        return Err(Error::domain(format!(
            "offdiagonal exponents must lie in [0, 1/2), got beta={}, sigma={}",
            cfg.beta, cfg.sigma
        )));
    }
    let p_lo = 1.0 / (1.0 - cfg.sigma);
    let q_hi = 1.0 / cfg.beta;
    if !(cfg.p > p_lo && cfg.p <= cfg.q && cfg.q < q_hi) {
        return Err(Error::domain(format!(
            "exponents must satisfy {p_lo} < p <= q < {q_hi}, got p={}, q={}",
            cfg.p, cfg.q
        )));
    }
    let mut report = SuiteReport::new("offdiagonal");

    let mut norms = Vec::new();
    for &j in &cfg.js {
        let region = annulus_grids(cfg, j);
        norms.push((j, ball_to_region_norm(cfg, cfg.t, &region)));
    }

    // monotone decay in j (zeros allowed once the Gaussian factor underflows)
    let mut monotone = true;
    for w in norms.windows(2) {
        if w[1].1 > w[0].1 * (1.0 + 1e-12) {
            monotone = false;
        }
    }
    report.push(CheckRow::leq(
        "annulus norms monotone in j".to_string(),
        if monotone { 0.0 } else { 1.0 },
        0.5,
    ));

    // fitted rate from consecutive pairs: c_j = ((2^j r)^2 - (2^{j-1} r)^2)
    //                                       / (t ln(norm_{j-1}/norm_j))
    const FLOOR: f64 = 1e-280;
    let mut fitted = Vec::new();
    for w in norms.windows(2) {
        let (j0, n0) = w[0];
        let (j1, n1) = w[1];
        if n0 > FLOOR && n1 > FLOOR && j1 == j0 + 1 {
            let gap = (4f64.powi(j1 as i32) - 4f64.powi(j0 as i32)) * cfg.ball_radius.powi(2)
                / 4.0;
            let c = gap / (cfg.t * (n0 / n1).ln());
            fitted.push(c);
        }
    }
    if fitted.is_empty() {
        report.push(CheckRow::leq(
            "no annulus pair above the floating floor".to_string(),
            1.0,
            0.5,
        ));
    } else {
        let max_c = fitted.iter().copied().fold(0.0f64, f64::max);
        let min_c = fitted.iter().copied().fold(f64::INFINITY, f64::min);
        report.push(CheckRow::strictly_less(
            "fitted Gaussian rate positive and bounded".to_string(),
            if min_c > 0.0 { max_c } else { f64::INFINITY },
            64.0 * cfg.rate,
        ));
    }

    // on-diagonal: ||T_t||_{p->p} over the ball stays O(1) across t; the
    // Schur bound sqrt(pi * rate) * sup boundary factors gives the ceiling
    let ball = vec![segment_grid(
        cfg.ball_center - cfg.ball_radius,
        cfg.ball_center + cfg.ball_radius,
        cfg.points_per_unit,
    )
    .unwrap()];
    let x_min = (cfg.ball_center - cfg.ball_radius).max(1e-6);
    let mut worst: f64 = 0.0;
    for &t in &[1e-3, 1e-2, 0.1, 1.0] {
        let n = ball_to_region_norm(cfg, t, &ball);
        worst = worst.max(n);
    }
    let ceiling = (std::f64::consts::PI * cfg.rate).sqrt()
        * (1.0 + 1.0 / x_min).powf(cfg.beta + cfg.sigma)
        * 1.25;
    report.push(CheckRow::leq(
        "on-diagonal p->p norm uniformly bounded".to_string(),
        worst,
        ceiling,
    ));
    Ok(report)
}
