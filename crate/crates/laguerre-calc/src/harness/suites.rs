//! Inequality suites: the Bessel identities, the kernel order-descent
//! identities, the H-function convolution bound, and the spectral-layer
//! consistency checks.

use super::{CheckRow, SuiteReport};
use crate::error::Result;
use crate::kernels::heat_kernel_family;
use crate::params::{MultiIndex, NuVector};
use crate::quad::gauss_legendre;
use crate::special::bessel_i_scaled;
use crate::spectral::{
    analyze_1d, apply_heat, apply_neg_power, riesz_apply_1d, synthesize_1d, QuadSpec,
    RieszMatrix01, RieszPath, SpectralCoeffs, TimeQuadSpec,
};

fn log_points(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Identity and bound suite for the scaled Bessel function:
///   gap identity   I_a - I_{a+2} = (2(a+1)/z) I_{a+1}         (rel <= 1e-9)
///   neighbor bound |I_a - I_{a+1}| < (4a+6) I_{a+1} / z       (strict)
///   derivative     d/dz [z^{-a} I_a] = z^{-a} I_{a+1}         (rel <= 1e-6,
///                  via h' + h = z^{-a} i_{a+1} in scaled form on [0.1, 50])
pub fn verify_bessel_suite(alphas: &[f64], z_lo: f64, z_hi: f64, n_z: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("bessel");
    let zs = log_points(z_lo, z_hi, n_z);
    for &alpha in alphas {
        let mut gap_res: f64 = 0.0;
        let mut neighbor_ratio: f64 = 0.0;
        let mut deriv_err: f64 = 0.0;
        for &z in &zs {
            let i0 = bessel_i_scaled(alpha, z)?;
            let i1 = bessel_i_scaled(alpha + 1.0, z)?;
            let i2 = bessel_i_scaled(alpha + 2.0, z)?;
            let res = ((i0 - i2) - 2.0 * (alpha + 1.0) / z * i1).abs() / i0;
            gap_res = gap_res.max(res);
            let ratio = (i0 - i1).abs() * z / ((4.0 * alpha + 6.0) * i1);
            neighbor_ratio = neighbor_ratio.max(ratio);
            if (0.1..=50.0).contains(&z) {
                // h(z) = z^{-a} e^{-z} I_a(z); h' + h = z^{-a} e^{-z} I_{a+1}
                let h = |z: f64| z.powf(-alpha) * bessel_i_scaled(alpha, z).unwrap();
                let step = 1e-4 * z;
                let fd = (h(z + step) - h(z - step)) / (2.0 * step);
                let lhs = fd + h(z);
                let rhs = z.powf(-alpha) * i1;
                deriv_err = deriv_err.max(((lhs - rhs) / rhs).abs());
            }
        }
        report.push(CheckRow::leq(
            format!("gap-identity rel residual, alpha={alpha}"),
            gap_res,
            1e-9,
        ));
        report.push(CheckRow::strictly_less(
            format!("neighbor-gap bound ratio, alpha={alpha}"),
            neighbor_ratio,
            1.0,
        ));
        report.push(CheckRow::leq(
            format!("derivative identity rel err, alpha={alpha}"),
            deriv_err,
            1e-6,
        ));
    }
    Ok(report)
}

/// Kernel order-descent identity and neighbor bound:
///   p^a - p^{a+2} = 2(a+1) (1-r)/(2 sqrt(r) xy) p^{a+1}   (rel <= 1e-8)
///   |p^a - p^{a+1}| <= (4a+6) (1-r)/(2 sqrt(r) xy) p^{a+1} (pointwise)
pub fn verify_kernel_identities(
    alphas: &[f64],
    ts: &[f64],
    xs: &[f64],
    ys: &[f64],
) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("kernel-identities");
    for &alpha in alphas {
        let mut ident_res: f64 = 0.0;
        let mut bound_ratio: f64 = 0.0;
        for &t in ts {
            let s = (-2.0f64 * t).exp();
            let q = -(-4.0f64 * t).exp_m1();
            for &x in xs {
                for &y in ys {
                    let fam = heat_kernel_family(alpha, t, x, y, 2)?;
                    let factor = q / (2.0 * s * x * y);
                    let res = ((fam[0] - fam[2]) - 2.0 * (alpha + 1.0) * factor * fam[1]).abs()
                        / fam[0];
                    ident_res = ident_res.max(res);
                    let ratio =
                        (fam[0] - fam[1]).abs() / ((4.0 * alpha + 6.0) * factor * fam[1]);
                    bound_ratio = bound_ratio.max(ratio);
                }
            }
        }
        report.push(CheckRow::leq(
            format!("order-descent identity rel residual, alpha={alpha}"),
            ident_res,
            1e-8,
        ));
        report.push(CheckRow::strictly_less(
            format!("neighbor-order bound ratio, alpha={alpha}"),
            bound_ratio,
            1.0,
        ));
    }
    Ok(report)
}

fn h_function(t: f64, a: f64, c: f64, x: f64, y: f64) -> f64 {
    let st = t.sqrt();
    (-((x - y) * (x - y)) / (c * t)).exp() / st
        * (1.0 + st / x).powf(a)
        * (1.0 + st / y).powf(a)
}

/// Quadrature nodes resolving z^{-2a} at the origin plus Gaussian spikes of
/// width ~ sqrt(t) at x and y.
fn peaked_rule(beta: f64, peaks: &[f64], width: f64, upper: f64) -> Vec<(f64, f64)> {
    let mut edges = vec![0.0f64];
    // geometric edges out of the origin
    let mut e = (upper / 1048576.0).min(width / 1024.0).max(1e-12);
    while e < upper {
        edges.push(e);
        e *= 2.0;
    }
    for &p in peaks {
        let mut w = width;
        while w <= 16.0 * width {
            for cand in [p - w, p + w] {
                if cand > 0.0 && cand < upper {
                    edges.push(cand);
                }
            }
            w *= 2.0;
        }
        if p > 0.0 && p < upper {
            edges.push(p);
        }
    }
    edges.push(upper);
    edges.sort_by(|a, b| a.partial_cmp(b).unwrap());
    edges.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    let (gx, gw) = gauss_legendre(12);
    let mut rule = Vec::new();
    let kappa = if beta >= 0.0 { 1.0 } else { (4.0 / (beta + 1.0)).ceil().clamp(1.0, 48.0) };
    for w in edges.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if lo == 0.0 {
            // graded panel against the origin: z = hi * v^kappa
            for (xi, wi) in gx.iter().zip(&gw) {
                let v = 0.5 * (xi + 1.0);
                let z = hi * v.powf(kappa);
                if z > 0.0 {
                    rule.push((z, 0.5 * wi * hi * kappa * v.powf(kappa - 1.0)));
                }
            }
        } else {
            for (xi, wi) in gx.iter().zip(&gw) {
                rule.push((lo + 0.5 * (hi - lo) * (xi + 1.0), 0.5 * (hi - lo) * wi));
            }
        }
    }
    rule
}

/// Convolution bound for the H family:
///   int H_{t,a,c}(x,z) H_{t,a,c}(z,y) dz <= C H_{t,a,4c}(x,y),
/// with C stable under grid refinement; replacing 4c by c on the right is the
/// negative control and must grow.
pub fn verify_h_convolution(a: f64, c: f64, ts: &[f64], n_xy: usize) -> Result<SuiteReport> {
    let n_xy = n_xy.max(6);
    let mut report = SuiteReport::new("convolution");
    if !(0.0..0.5).contains(&a) {
        return Err(crate::error::Error::domain(format!(
            "H-function exponent must lie in [0, 1/2), got {a}"
        )));
    }
    let convolve = |t: f64, x: f64, y: f64| -> f64 {
        let width = (c * t).sqrt();
        let upper = (x.max(y) + 12.0 * width).max(4.0);
        let rule = peaked_rule(-2.0 * a, &[x, y], width, upper);
        rule.iter()
            .map(|(z, w)| h_function(t, a, c, x, *z) * h_function(t, a, c, *z, y) * w)
            .sum()
    };
    let fit = |n: usize, lo: f64, t_scale: f64, rhs_rate: f64| -> f64 {
        let pts = log_points(lo, 8.0, n);
        let mut worst: f64 = 0.0;
        for &t in ts {
            let t = t * t_scale;
            for &x in &pts {
                for &y in &pts {
                    let ratio = convolve(t, x, y) / h_function(t, a, rhs_rate, x, y);
                    if ratio > worst {
                        worst = ratio;
                    }
                }
            }
        }
        worst
    };
    // the 4c majorization: stable under refinement
    let coarse = fit(n_xy, 5e-2, 1.0, 4.0 * c);
    let fine = fit(2 * n_xy, 2.5e-3, 1e-2, 4.0 * c);
    report.push(CheckRow::leq(
        format!("H-convolution constant growth, a={a}, rate 4c"),
        fine / coarse,
        2.0,
    ));
    report.push(CheckRow::leq(
        format!("H-convolution fitted constant finite, a={a}"),
        fine,
        1e6,
    ));
    // negative control: rhs at rate c blows up when |x-y|^2/t is pushed
    let coarse_bad = fit(n_xy, 5e-2, 1.0, c);
    let fine_bad = fit(2 * n_xy, 2.5e-3, 1e-2, c);
    report.push(CheckRow::geq(
        format!("H-convolution control growth, a={a}, rate c"),
        fine_bad / coarse_bad,
        2.0,
    ));
    Ok(report)
}

/// Spectral-layer consistency: contraction of the exact Riesz matrices at
/// two cutoffs, adjoint pairing, diagonal-calculus commutation, the Gamma
/// integral fixing the negative-power constant, and agreement of the kernel
/// and spectral transform paths.
pub fn verify_spectral_suite(cutoff: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("spectral");
    for n in 1..=2usize {
        let nu = NuVector::new(vec![-0.75; n])?;
        let mut k_entries = vec![0usize; n];
        k_entries[0] = 1;
        for k in [MultiIndex::new(vec![1; n])?, MultiIndex::new(k_entries)?] {
            for co in [cutoff, 2 * cutoff] {
                let mat = RieszMatrix01::new(&nu, &k, co)?;
                report.push(CheckRow::leq(
                    format!("riesz01 norm n={n} k={:?} cutoff={co}", k.entries()),
                    mat.operator_norm(),
                    1.0 + 1e-10,
                ));
            }
        }
    }

    // adjoint pairing <R f, g> = <f, R* g> in exact arithmetic
    let nu = NuVector::scalar(0.25)?;
    let k = MultiIndex::scalar(1)?;
    let mat = RieszMatrix01::new(&nu, &k, 24)?;
    let mut f = SpectralCoeffs::zeros(nu.clone(), 24);
    let mut g = SpectralCoeffs::zeros(nu.shifted(&k)?, 24);
    for a in 0..=24usize {
        f.set(&MultiIndex::scalar(a)?, 1.0 / (1.0 + a as f64))?;
        g.set(&MultiIndex::scalar(a)?, (a as f64 * 0.37).cos())?;
    }
    let lhs = mat.apply(&f)?.dot(&g)?;
    let rhs = f.dot(&mat.apply_adjoint(&g)?)?;
    report.push(CheckRow::leq(
        "adjoint pairing defect".to_string(),
        (lhs - rhs).abs(),
        1e-12 * lhs.abs().max(1.0),
    ));

    // commutation of the diagonal calculus
    let hn = apply_heat(&apply_neg_power(&f, 0.5, 2.0)?, 0.4)?;
    let nh = apply_neg_power(&apply_heat(&f, 0.4)?, 0.5, 2.0)?;
    let defect = hn
        .coeffs()
        .iter()
        .zip(nh.coeffs())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    report.push(CheckRow::leq(
        "diagonal calculus commutation".to_string(),
        defect,
        1e-15,
    ));

    // Gamma integral: (1/Gamma(s)) int t^s e^{-t lambda} dt/t = lambda^{-s}
    let (lambda, s) = (6.0, 1.5);
    let rule = crate::quad::HalfLineRule::new(60.0, s - 1.0, 1024)?;
    let integral = rule.integrate(|t| t.powf(s - 1.0) * (-t * lambda).exp())
        / crate::special::gamma_fn(s)?;
    report.push(CheckRow::leq(
        "gamma-integral identity rel err".to_string(),
        (integral / lambda.powf(-s) - 1.0).abs(),
        1e-10,
    ));

    // path agreement on a band-limited function
    let nu_s = 0.5;
    let f_band = |x: f64| {
        crate::special::laguerre_fn(2, nu_s, x).unwrap()
            - 0.4 * crate::special::laguerre_fn(5, nu_s, x).unwrap()
    };
    let eval: Vec<f64> = (1..=8).map(|i| 0.4 * i as f64).collect();
    let spectral = riesz_apply_1d(
        f_band,
        &eval,
        nu_s,
        1,
        &RieszPath::Spectral01 {
            cutoff: 32,
            quad: QuadSpec::default(),
        },
    )?;
    let kernel = riesz_apply_1d(
        f_band,
        &eval,
        nu_s,
        1,
        &RieszPath::KernelQuadrature {
            time_quad: TimeQuadSpec::default(),
            y_max: 14.0,
            points: 192,
        },
    )?;
    let err_sq: f64 = spectral
        .iter()
        .zip(&kernel)
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    let norm_sq: f64 = spectral.iter().map(|a| a * a).sum::<f64>().max(1e-300);
    report.push(CheckRow::leq(
        "riesz path agreement L2 rel err".to_string(),
        (err_sq / norm_sq).sqrt(),
        1e-5,
    ));

    // round trip through analyze/synthesize
    let c = analyze_1d(
        |x| (-(x - 1.0) * (x - 1.0)).exp() * x.powf(nu_s + 0.5),
        nu_s,
        64,
        &QuadSpec::default(),
    )?;
    let back = analyze_1d(|x| synthesize_1d(&c, x).unwrap(), nu_s, 64, &QuadSpec::default())?;
    let drift = c
        .coeffs()
        .iter()
        .zip(back.coeffs())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    report.push(CheckRow::leq(
        "analyze/synthesize round-trip drift".to_string(),
        drift,
        1e-8,
    ));
    Ok(report)
}
