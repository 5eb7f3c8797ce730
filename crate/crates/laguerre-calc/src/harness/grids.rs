//! Deterministic sample grids for bound fitting. Refinement doubles the node
//! counts and squares the sub-unit lower bounds, so each refinement pushes
//! the samples toward the t -> 0 and x -> 0 corners where the estimates are
//! sharpest; a profile missing a boundary factor shows up as a constant that
//! keeps growing under refinement instead of stabilizing.

use crate::error::{Error, Result};

/// Logarithmically spaced points on [lo, hi].
#[derive(Clone, Debug)]
pub struct LogGrid {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl LogGrid {
    pub fn new(lo: f64, hi: f64, points: usize) -> Result<Self> {
        if !(lo > 0.0 && hi > lo) || points < 2 {
            return Err(Error::domain(format!(
                "log grid requires 0 < lo < hi and >= 2 points, got [{lo}, {hi}] x {points}"
            )));
        }
        Ok(LogGrid { lo, hi, points })
    }

    pub fn values(&self) -> Vec<f64> {
        let (a, b) = (self.lo.ln(), self.hi.ln());
        (0..self.points)
            .map(|i| (a + (b - a) * i as f64 / (self.points - 1) as f64).exp())
            .collect()
    }

    fn refined(&self) -> LogGrid {
        LogGrid {
            lo: if self.lo < 1.0 { self.lo * self.lo } else { self.lo },
            hi: self.hi,
            points: self.points * 2,
        }
    }
}

/// Product grid over (t, x_1..x_n, y_1..y_n) plus corner spot checks:
/// proxies for t -> 0 and t large at mid-range (x, y), and a deep boundary
/// proxy crossed with every t for the first x and the first y coordinate.
/// All sub-unit proxies square under refinement along with the grid bounds,
/// so a missing boundary factor cannot hide behind a fixed worst sample: a
/// deficit (1 + sqrt(t)/y)^gamma gains the factor (boundary proxy)^{-gamma}
/// per refinement, which outruns any slow drift of the in-range ratios.
#[derive(Clone, Debug)]
pub struct SampleGrid {
    pub t: LogGrid,
    pub x: Vec<LogGrid>,
    pub y: Vec<LogGrid>,
    pub corner_spots: bool,
    pub corner_t_lo: f64,
    pub corner_t_hi: f64,
    /// Boundary proxy applied to x and to y, crossed with the t-grid.
    pub corner_edge: f64,
}

impl SampleGrid {
    /// One-dimensional default: t in [1e-2, 50], x, y in [5e-2, 6],
    /// corner proxies t = 1e-4, t = 1e2, boundary edge 1e-5.
    pub fn default_1d() -> Self {
        SampleGrid {
            t: LogGrid::new(1e-2, 50.0, 10).unwrap(),
            x: vec![LogGrid::new(5e-2, 6.0, 10).unwrap()],
            y: vec![LogGrid::new(5e-2, 6.0, 10).unwrap()],
            corner_spots: true,
            corner_t_lo: 1e-4,
            corner_t_hi: 1e2,
            corner_edge: 1e-5,
        }
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn refined(&self) -> SampleGrid {
        SampleGrid {
            t: self.t.refined(),
            x: self.x.iter().map(|g| g.refined()).collect(),
            y: self.y.iter().map(|g| g.refined()).collect(),
            corner_spots: self.corner_spots,
            corner_t_lo: self.corner_t_lo * self.corner_t_lo,
            corner_t_hi: self.corner_t_hi,
            corner_edge: self.corner_edge * self.corner_edge,
        }
    }

    /// All (t, x, y) samples in a fixed deterministic order.
    pub fn samples(&self) -> Vec<(f64, Vec<f64>, Vec<f64>)> {
        let n = self.dim();
        let ts = self.t.values();
        let xs: Vec<Vec<f64>> = self.x.iter().map(|g| g.values()).collect();
        let ys: Vec<Vec<f64>> = self.y.iter().map(|g| g.values()).collect();
        let mut out = Vec::new();
        let mut point = vec![0usize; 2 * n];
        let dims: Vec<usize> = xs
            .iter()
            .map(|v| v.len())
            .chain(ys.iter().map(|v| v.len()))
            .collect();
        let total: usize = dims.iter().product();
        for &t in &ts {
            for flat in 0..total {
                let mut rest = flat;
                for d in (0..2 * n).rev() {
                    point[d] = rest % dims[d];
                    rest /= dims[d];
                }
                let xv: Vec<f64> = (0..n).map(|j| xs[j][point[j]]).collect();
                let yv: Vec<f64> = (0..n).map(|j| ys[j][point[n + j]]).collect();
                out.push((t, xv, yv));
            }
        }
        if self.corner_spots {
            let mid_x: Vec<f64> = xs.iter().map(|v| v[v.len() / 2]).collect();
            let mid_y: Vec<f64> = ys.iter().map(|v| v[v.len() / 2]).collect();
            for &t in &[self.corner_t_lo, self.corner_t_hi] {
                out.push((t, mid_x.clone(), mid_y.clone()));
            }
            let mut corner_x = mid_x.clone();
            corner_x[0] = self.corner_edge;
            let mut corner_y = mid_y.clone();
            corner_y[0] = self.corner_edge;
            for &t in &ts {
                out.push((t, corner_x.clone(), mid_y.clone()));
                out.push((t, mid_x.clone(), corner_y.clone()));
            }
        }
        out
    }
}
