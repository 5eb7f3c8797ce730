//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.
//!
//! Criterion 13 includes a sub-assertion (growth of the local majorant
//! operator below its quoted exponent range) that is provably unattainable:
//! that operator is Schur-bounded on every L^p, so the quoted range is
//! sufficient but not sharp. The corresponding test asserts the criterion
//! literally and is expected to fail; the neighbouring Hardy-piece controls
//! carry the real sharpness checks and pass.

use laguerre_calc::harness::{
    self, fit_gaussian_bound, norm_sweep, BoundProfile, SampleGrid, SweepConfig, Verdict,
};
use laguerre_calc::kernels::{delta_heat_kernel_1d, delta_k_heat_kernel_1d, heat_kernel_1d};
use laguerre_calc::params::{eigenvalue_1d, gamma_exponent, MultiIndex, NuVector};
use laguerre_calc::quad::HalfLineRule;
use laguerre_calc::special::{laguerre_basis_row, laguerre_fn};
use laguerre_calc::spectral::{
    riesz_apply_1d, QuadSpec, RieszMatrix01, RieszPath, TimeQuadSpec,
};
use laguerre_calc::weights::{
    ap_constant_estimate, in_ap_power, theorem_weight_condition, BallFamily, GridFn1d,
    WeightConditionQuery,
};
use std::time::Instant;

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "{} criterion {criterion}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
}

#[test]
fn criterion_01_orthonormality() {
    let t0 = Instant::now();
    let mut worst: f64 = 0.0;
    for &nu in &[-0.9, -0.5, 0.0, 1.3] {
        let rule = HalfLineRule::new(
            HalfLineRule::basis_upper(32, nu, 1),
            2.0 * nu + 1.0,
            1024,
        )
        .unwrap();
        let mut gram = vec![0.0f64; 33 * 33];
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            let row = laguerre_basis_row(32, nu, x).unwrap();
            for i in 0..=32 {
                for j in i..=32 {
                    gram[i * 33 + j] += w * row[i] * row[j];
                }
            }
        }
        for i in 0..=32 {
            for j in i..=32 {
                let expect = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((gram[i * 33 + j] - expect).abs());
            }
        }
    }
    let pass = worst <= 1e-8;
    report(
        "01 (orthonormality)",
        pass,
        &format!("max Gram deviation {worst:.3e} <= 1e-8, {:?}", t0.elapsed()),
    );
    assert!(pass);
    assert!(t0.elapsed().as_secs() < 10);
}

#[test]
fn criterion_02_eigen_relation() {
    let t0 = Instant::now();
    let h = 1e-3;
    let xs: Vec<f64> = (0..200).map(|i| 0.2 + 5.8 * i as f64 / 199.0).collect();
    let mut worst: f64 = 0.0;
    for &nu in &[-0.9, -0.5, 0.0, 1.3] {
        for k in [0usize, 1, 4, 9, 16] {
            let lambda = eigenvalue_1d(nu, k);
            let phi = |x: f64| laguerre_fn(k, nu, x).unwrap();
            let mut num = 0.0;
            let mut den = 0.0;
            for &x in &xs {
                let second = (phi(x + h) - 2.0 * phi(x) + phi(x - h)) / (h * h);
                let potential = x * x + (nu * nu - 0.25) / (x * x);
                let applied = -second + potential * phi(x);
                let expect = lambda * phi(x);
                num += (applied - expect) * (applied - expect);
                den += expect * expect;
            }
            worst = worst.max((num / den).sqrt());
        }
    }
    let pass = worst <= 1e-4;
    report(
        "02 (eigen relation)",
        pass,
        &format!("max relative L2 error {worst:.3e} <= 1e-4, {:?}", t0.elapsed()),
    );
    assert!(pass);
    assert!(t0.elapsed().as_secs() < 10);
}

#[test]
fn criterion_03_kernel_vs_spectral_sum() {
    let t0 = Instant::now();
    let pts: Vec<f64> = (0..20).map(|i| 0.15 + 4.8 * i as f64 / 19.0).collect();
    let mut worst: f64 = 0.0;
    for &nu in &[-0.75, 0.5] {
        for &t in &[0.1, 0.5, 2.0] {
            let decay: Vec<f64> = (0..=256)
                .map(|k| (-t * eigenvalue_1d(nu, k)).exp())
                .collect();
            let rows: Vec<Vec<f64>> = pts
                .iter()
                .map(|&x| laguerre_basis_row(256, nu, x).unwrap())
                .collect();
            for (i, &x) in pts.iter().enumerate() {
                for (j, &y) in pts.iter().enumerate() {
                    let direct = heat_kernel_1d(nu, t, x, y).unwrap();
                    let sum: f64 = (0..=256).map(|k| decay[k] * rows[i][k] * rows[j][k]).sum();
                    worst = worst.max((direct - sum).abs());
                }
            }
        }
    }
    let pass = worst <= 1e-8;
    report(
        "03 (kernel vs spectral sum)",
        pass,
        &format!("max abs deviation {worst:.3e} <= 1e-8, {:?}", t0.elapsed()),
    );
    assert!(pass);
    assert!(t0.elapsed().as_secs() < 60);
}

#[test]
fn criterion_04_semigroup_law() {
    let t0 = Instant::now();
    let (s, t) = (0.2, 0.3);
    let mut worst: f64 = 0.0;
    for &nu in &[-0.75, 0.5] {
        let rule = HalfLineRule::new(14.0, 2.0 * nu + 1.0, 1024).unwrap();
        for &(x, y) in &[(0.8, 1.4), (2.0, 0.5), (1.0, 1.0), (3.0, 2.2)] {
            let conv = rule.integrate(|z| {
                heat_kernel_1d(nu, s, x, z).unwrap() * heat_kernel_1d(nu, t, z, y).unwrap()
            });
            let direct = heat_kernel_1d(nu, s + t, x, y).unwrap();
            worst = worst.max((conv - direct).abs());
        }
    }
    let pass = worst <= 1e-8;
    report(
        "04 (semigroup law)",
        pass,
        &format!("max Chapman-Kolmogorov residual {worst:.3e} <= 1e-8, {:?}", t0.elapsed()),
    );
    assert!(pass);
}

#[test]
fn criterion_05_bessel_suite() {
    let t0 = Instant::now();
    let rep = harness::verify_bessel_suite(&[-0.9, -0.5, 0.0, 1.3], 1e-2, 1e2, 80).unwrap();
    let pass = rep.passed();
    report(
        "05 (Bessel identity suite)",
        pass,
        &format!("{} checks, {} failing, {:?}", rep.rows.len(), rep.fail_count(), t0.elapsed()),
    );
    assert!(pass, "{:?}", rep.rows.iter().filter(|r| !r.pass).collect::<Vec<_>>());
}

#[test]
fn criterion_06_kernel_order_identity() {
    let t0 = Instant::now();
    let ts = [0.05, 0.2, 1.0, 5.0];
    let pts: Vec<f64> = (0..8)
        .map(|i| 0.1 * (6.0f64 / 0.1).powf(i as f64 / 7.0))
        .collect();
    let rep = harness::verify_kernel_identities(&[-0.75, 0.0, 1.5], &ts, &pts, &pts).unwrap();
    let pass = rep.passed();
    report(
        "06 (kernel order identity)",
        pass,
        &format!("{} checks, {} failing, {:?}", rep.rows.len(), rep.fail_count(), t0.elapsed()),
    );
    assert!(pass, "{:?}", rep.rows.iter().filter(|r| !r.pass).collect::<Vec<_>>());
}

#[test]
fn criterion_07_derivative_kernels_vs_nested_fd() {
    let t0 = Instant::now();
    let h = 1e-3;
    let delta_fd = |nu: f64, f: &dyn Fn(f64) -> f64, x: f64| {
        (f(x + h) - f(x - h)) / (2.0 * h) + (x - (nu + 0.5) / x) * f(x)
    };
    let mut worst: f64 = 0.0;
    for &nu in &[-0.75, 0.5] {
        for &(t, x, y) in &[(0.25, 1.0, 1.5), (0.4, 0.8, 0.6), (1.0, 1.6, 2.0)] {
            // k = 1
            let d1 = delta_k_heat_kernel_1d(nu, 1, t, x, y).unwrap();
            let f0 = |x: f64| heat_kernel_1d(nu, t, x, y).unwrap();
            let fd1 = delta_fd(nu, &f0, x);
            worst = worst.max(((d1 - fd1) / fd1).abs());
            // k = 2 (first level exact, outer by finite differences)
            let d2 = delta_k_heat_kernel_1d(nu, 2, t, x, y).unwrap();
            let f1 = |x: f64| delta_heat_kernel_1d(nu, t, x, y).unwrap();
            let fd2 = delta_fd(nu, &f1, x);
            worst = worst.max(((d2 - fd2) / fd2).abs());
            // k = 3
            let d3 = delta_k_heat_kernel_1d(nu, 3, t, x, y).unwrap();
            let f2 = |x: f64| delta_fd(nu, &f1, x);
            let fd3 = delta_fd(nu, &f2, x);
            worst = worst.max(((d3 - fd3) / fd3).abs());
        }
    }
    let pass = worst <= 1e-4;
    report(
        "07 (derivative kernels vs nested FD)",
        pass,
        &format!("max relative deviation {worst:.3e} <= 1e-4, {:?}", t0.elapsed()),
    );
    assert!(pass);
}

#[test]
fn criterion_08_gaussian_bound_fits() {
    let t0 = Instant::now();
    let grid = SampleGrid::default_1d();
    let mut all = true;
    let mut detail = String::new();
    for &nu in &[-0.75, 0.5] {
        let g = gamma_exponent(nu);
        for k in [1usize, 2, 3] {
            let (e_x, e_y) = if k % 2 == 1 { (0.0, g) } else { (g, g) };
            let profile = BoundProfile::new_1d((k as f64 + 1.0) / 2.0, e_x, e_y);
            let rep = fit_gaussian_bound(
                |t, x: &[f64], y: &[f64]| delta_k_heat_kernel_1d(nu, k, t, x[0], y[0]),
                &profile,
                &grid,
            )
            .unwrap();
            if !rep.pass {
                all = false;
                detail.push_str(&format!(" profile(nu={nu},k={k}) unstable;"));
            }
        }
    }
    // improved odd-order profile for nu = 0.5
    for k in [1usize, 3] {
        let rep = harness::verify_odd_improvement(0.5, k, &grid).unwrap();
        if !rep.pass {
            all = false;
            detail.push_str(&format!(" odd-improvement(k={k}) unstable;"));
        }
    }
    // even-order negative control with the odd profile must fail
    let control = fit_gaussian_bound(
        |t, x: &[f64], y: &[f64]| delta_k_heat_kernel_1d(0.5, 2, t, x[0], y[0]),
        &BoundProfile::new_1d(1.5, -(0.5 + 1.5), 0.0),
        &grid,
    )
    .unwrap();
    if control.pass {
        all = false;
        detail.push_str(" even-order control unexpectedly stable;");
    }
    report(
        "08 (Gaussian bound fits)",
        all,
        &format!("6 profiles + 2 improved + 1 control{detail} {:?}", t0.elapsed()),
    );
    assert!(all, "{detail}");
    assert!(t0.elapsed().as_secs() < 300);
}

#[test]
fn criterion_09_l2_contraction() {
    let t0 = Instant::now();
    let mut worst: f64 = 0.0;
    for n in 1..=2usize {
        let nu = NuVector::new(vec![-0.75; n]).unwrap();
        let patterns: Vec<Vec<usize>> = if n == 1 {
            vec![vec![1]]
        } else {
            vec![vec![1, 0], vec![0, 1], vec![1, 1]]
        };
        for pattern in patterns {
            let k = MultiIndex::new(pattern).unwrap();
            let mat = RieszMatrix01::new(&nu, &k, 256).unwrap();
            worst = worst.max(mat.operator_norm());
        }
    }
    let pass = worst <= 1.0 + 1e-10;
    report(
        "09 (L2 contraction)",
        pass,
        &format!("max truncated operator norm {worst:.12} <= 1 + 1e-10, {:?}", t0.elapsed()),
    );
    assert!(pass);
}

#[test]
fn criterion_10_riesz_path_agreement() {
    let t0 = Instant::now();
    let nu = 0.5;
    let f = |x: f64| {
        laguerre_fn(1, nu, x).unwrap() + 0.5 * laguerre_fn(3, nu, x).unwrap()
            - 0.2 * laguerre_fn(6, nu, x).unwrap()
            + 0.1 * laguerre_fn(9, nu, x).unwrap()
    };
    let eval: Vec<f64> = (1..=24).map(|i| 0.18 * i as f64).collect();
    let spectral = riesz_apply_1d(
        f,
        &eval,
        nu,
        1,
        &RieszPath::Spectral01 {
            cutoff: 48,
            quad: QuadSpec::default(),
        },
    )
    .unwrap();
    let kernel = riesz_apply_1d(
        f,
        &eval,
        nu,
        1,
        &RieszPath::KernelQuadrature {
            time_quad: TimeQuadSpec::default(),
            y_max: 14.0,
            points: 192,
        },
    )
    .unwrap();
    let err_sq: f64 = spectral
        .iter()
        .zip(&kernel)
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    let norm_sq: f64 = spectral.iter().map(|a| a * a).sum();
    let rel = (err_sq / norm_sq).sqrt();
    let pass = rel <= 1e-5;
    report(
        "10 (Riesz path agreement)",
        pass,
        &format!("relative L2 gap {rel:.3e} <= 1e-5, {:?}", t0.elapsed()),
    );
    assert!(pass);
}

#[test]
fn criterion_11_boundedness_sweep() {
    let t0 = Instant::now();
    // sanity: the weighted rows really are on the two sides of the condition
    let cond = |alpha: f64| {
        theorem_weight_condition(&WeightConditionQuery {
            nu: NuVector::scalar(-0.75).unwrap(),
            k: MultiIndex::scalar(2).unwrap(),
            p: 2.0,
            alpha,
        })
        .unwrap()
    };
    assert!(cond(0.3), "alpha = 0.3 should satisfy the weight condition at p = 2");
    assert!(!cond(0.8), "alpha = 0.8 should violate the A-condition at p = 2");

    let mut cfg = SweepConfig::new(-0.75, 2);
    cfg.ps = vec![1.2, 1.5, 2.0, 3.5, 6.0];
    cfg.alphas = vec![0.0, 0.3, 0.8];
    cfg.refinements = vec![256, 512, 1024];
    let rows_k2 = norm_sweep(&cfg).unwrap();

    let mut cfg = SweepConfig::new(-0.75, 1);
    cfg.ps = vec![1.5, 2.0, 6.0, 12.0];
    cfg.alphas = vec![0.0];
    cfg.refinements = vec![256, 512, 1024];
    let rows_k1 = norm_sweep(&cfg).unwrap();

    let verdict = |rows: &[harness::NormSweepRow], p: f64, alpha: f64| {
        harness::sweep::final_verdict(rows, p, alpha).unwrap()
    };
    let mut all = true;
    let mut detail = String::new();
    for (p, expect) in [
        (1.2, Verdict::Growing),
        (1.5, Verdict::Stable),
        (2.0, Verdict::Stable),
        (3.5, Verdict::Stable),
        (6.0, Verdict::Growing),
    ] {
        let got = verdict(&rows_k2, p, 0.0);
        if got != expect {
            all = false;
            detail.push_str(&format!(" k=2 p={p}: {got} (expected {expect});"));
        }
    }
    for p in [1.5, 2.0, 6.0, 12.0] {
        let got = verdict(&rows_k1, p, 0.0);
        if got != Verdict::Stable {
            all = false;
            detail.push_str(&format!(" k=1 p={p}: {got} (expected stable);"));
        }
    }
    // weighted rows at p = 2
    if verdict(&rows_k2, 2.0, 0.3) != Verdict::Stable {
        all = false;
        detail.push_str(" k=2 p=2 alpha=0.3 not stable;");
    }
    if verdict(&rows_k2, 2.0, 0.8) != Verdict::Growing {
        all = false;
        detail.push_str(" k=2 p=2 alpha=0.8 not growing;");
    }
    // contraction invariant: k = 1, p = 2, alpha = 0 estimates stay <= 1.05
    for row in rows_k1.iter().filter(|r| r.p == 2.0 && r.alpha == 0.0) {
        if row.norm > 1.05 {
            all = false;
            detail.push_str(&format!(" k=1 p=2 N={} norm {:.4} > 1.05;", row.n_points, row.norm));
        }
    }
    report(
        "11 (boundedness sweep)",
        all,
        &format!("verdicts across (p, alpha, N){detail} {:?}", t0.elapsed()),
    );
    assert!(all, "{detail}");
    assert!(t0.elapsed().as_secs() < 900);
}

#[test]
fn criterion_12_weight_characterizations() {
    let t0 = Instant::now();
    // 10 members and 10 non-members of A_p among power weights x^alpha
    let samples: [(f64, f64); 20] = [
        // members: -1 < alpha < p - 1
        (0.0, 1.5),
        (0.5, 2.0),
        (-0.5, 2.0),
        (1.0, 3.0),
        (-0.8, 1.5),
        (2.0, 4.0),
        (0.3, 1.7),
        (-0.3, 1.4),
        (1.5, 3.5),
        (0.9, 2.5),
        // non-members, clear margins on either side
        (2.5, 2.0),
        (1.0, 1.5),
        (3.0, 2.5),
        (-1.3, 2.0),
        (-1.6, 3.0),
        (4.0, 3.0),
        (2.2, 1.8),
        (-1.4, 1.5),
        (6.0, 4.0),
        (-2.0, 2.2),
    ];
    let mut all = true;
    let mut detail = String::new();
    for (alpha, p) in samples {
        let member = in_ap_power(alpha, p, 1).unwrap();
        let coarse = {
            let w = GridFn1d::from_fn(0.0, 4.0, 1 << 12, |x| x.powf(alpha)).unwrap();
            ap_constant_estimate(&w, p, &BallFamily::new(0.0, 4.0, 6).unwrap()).unwrap()
        };
        let fine = {
            let w = GridFn1d::from_fn(0.0, 4.0, 1 << 16, |x| x.powf(alpha)).unwrap();
            ap_constant_estimate(&w, p, &BallFamily::new(0.0, 4.0, 8).unwrap()).unwrap()
        };
        let stable = fine <= 1.5 * coarse;
        if stable != member {
            all = false;
            detail.push_str(&format!(
                " (alpha={alpha}, p={p}): member={member} but estimate {coarse:.3e} -> {fine:.3e};"
            ));
        }
    }
    report(
        "12 (weight characterizations)",
        all,
        &format!("20 sampled (alpha, p) pairs{detail} {:?}", t0.elapsed()),
    );
    assert!(all, "{detail}");
}

#[test]
fn criterion_13_majorant_suite() {
    let t0 = Instant::now();
    // four-case majorization, time-integral bounds, in-range stability and
    // the sharp Hardy-piece controls, at both sampled exponent pairs
    let mut all = true;
    let mut detail = String::new();
    for &(alpha, beta) in &[(0.2, 0.2), (0.4, 0.25)] {
        let cfg = harness::MajorantConfig {
            alpha,
            beta,
            nu: -0.75,
            n_coarse: 192,
            n_fine: 384,
            ..harness::MajorantConfig::default()
        };
        let rep = harness::verify_majorant_suite(&cfg).unwrap();
        if !rep.passed() {
            all = false;
            for row in rep.rows.iter().filter(|r| !r.pass) {
                detail.push_str(&format!(" [{alpha}/{beta}] {};", row.label));
            }
        }
    }
    // T_alpha stability on the claimed range p > 1/(1-alpha)
    for &alpha in &[0.2, 0.4] {
        let edge = 1.0 / (1.0 - alpha);
        for p in [edge + 0.4, 2.0 * edge] {
            let (c, f) = harness::majorants::t_alpha_norm_pair(alpha, p, 192, 384);
            if !(f <= 1.5 * c) {
                all = false;
                detail.push_str(&format!(" T_alpha(alpha={alpha}) unstable at p={p:.2};"));
            }
        }
    }
    report(
        "13 (majorant suite)",
        all,
        &format!("four-case + time-integral + operator norms{detail} {:?}", t0.elapsed()),
    );
    assert!(all, "{detail}");
}

/// The literal sharpness clause of the majorant criterion: discrete norms of
/// the local piece must GROW for p below 1/(1-alpha). The operator is
/// Schur-bounded on every L^p (both marginals of (1/x)(x/|x-y|)^alpha over
/// x/2 < y < 2x are finite constants), so no consistent discretization can
/// grow there and this assertion fails; it is kept as stated so the gap is
/// visible, and the analysis lives in the review notes. The sharp
/// out-of-range controls that do hold (and pass) are the Hardy pieces inside
/// criterion 13 above.
#[test]
fn criterion_13_t_alpha_sharpness_below_range() {
    let t0 = Instant::now();
    let mut any_growth = true;
    let mut detail = String::new();
    for &(alpha, p_below) in &[(0.2, 1.1), (0.4, 1.5)] {
        let (c, f) = harness::majorants::t_alpha_norm_pair(alpha, p_below, 192, 384);
        let grew = f > 1.5 * c;
        if !grew {
            any_growth = false;
            detail.push_str(&format!(
                " alpha={alpha}, p={p_below}: {c:.4} -> {f:.4} (no growth);"
            ));
        }
    }
    report(
        "13 (T_alpha sharpness below range)",
        any_growth,
        &format!("expected growth below 1/(1-alpha){detail} {:?}", t0.elapsed()),
    );
    assert!(
        any_growth,
        "unattainable as specified: T_alpha is Schur-bounded on every L^p;{detail}"
    );
}
