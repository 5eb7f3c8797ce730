//! End-to-end tests of the lagcalc binary: forwarding contracts, exit-code
//! mapping, report files and manifests.

use std::path::Path;
use std::process::{Command, Output};

fn lagcalc() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lagcalc"))
}

fn run(args: &[&str]) -> Output {
    lagcalc().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

fn csv_value(out: &Output, column: usize) -> f64 {
    let text = stdout(out);
    let line = text.lines().nth(1).expect("one data row");
    let cell = line.trim_end().split(',').nth(column).expect("column");
    cell.parse().expect("parses as f64")
}

#[test]
fn eval_basis_forwards_to_library() {
    let out = run(&["eval", "basis", "--nu", "-0.5", "--k", "0", "--x", "1.0"]);
    assert!(out.status.success());
    let value = csv_value(&out, 3);
    let expect = (2.0 / std::f64::consts::PI.sqrt()).sqrt() * (-0.5f64).exp();
    assert!((value - expect).abs() < 1e-12, "{value} vs {expect}");
}

#[test]
fn eval_kernel_forwards_to_library() {
    let out = run(&[
        "eval", "kernel", "--nu", "0.5", "--t", "0.5", "--x", "1", "--y", "2",
    ]);
    assert!(out.status.success());
    let value = csv_value(&out, 4);
    let expect = laguerre_calc::kernels::heat_kernel_1d(0.5, 0.5, 1.0, 2.0).unwrap();
    assert!(value > 0.0);
    assert!((value - expect).abs() < 1e-15 * expect.abs());
}

#[test]
fn eval_kernel_2d_takes_vector_points() {
    let out = run(&[
        "eval", "kernel", "--nu", "-0.5,-0.5", "--t", "0.4", "--x", "1.0,2.0", "--y", "1.5,0.7",
    ]);
    assert!(out.status.success());
    let value = csv_value(&out, 4);
    let nu = laguerre_calc::NuVector::new(vec![-0.5, -0.5]).unwrap();
    let expect =
        laguerre_calc::kernels::heat_kernel_nd(&nu, 0.4, &[1.0, 2.0], &[1.5, 0.7]).unwrap();
    assert!((value - expect).abs() < 1e-15 * expect.abs());
}

#[test]
fn eval_riesz_kernel_diagonal_is_exit_3() {
    let out = run(&[
        "eval", "riesz-kernel", "--nu", "0.5", "--k", "1", "--x", "1", "--y", "1",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn eval_bad_params_is_exit_2() {
    // nu <= -1 violates the domain
    let out = run(&["eval", "kernel", "--nu", "-1.5", "--t", "0.5", "--x", "1", "--y", "2"]);
    assert_eq!(out.status.code(), Some(2));
    // missing required point
    let out = run(&["eval", "kernel", "--nu", "0.5", "--t", "0.5", "--y", "2"]);
    assert_eq!(out.status.code(), Some(2));
    // dimension mismatch
    let out = run(&["eval", "kernel", "--nu", "0.5,0.5", "--t", "0.5", "--x", "1", "--y", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_bessel_defaults_pass_and_write_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["verify", "bessel", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("bessel.csv").exists());
    let manifest_path = dir.path().join("bessel_manifest.json");
    assert!(manifest_path.exists());
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&manifest_path).unwrap()).unwrap();
    assert_eq!(manifest["command"], "verify bessel");
    assert_eq!(manifest["suites"][0]["fail_count"], 0);
    // manifest references exactly the emitted CSV with its digest
    let outputs = manifest["outputs"].as_array().unwrap();
    assert_eq!(outputs.len(), 1);
    let digest = outputs[0]["sha256"].as_str().unwrap();
    assert_eq!(digest.len(), 64);
}

#[test]
fn verify_unknown_suite_is_exit_2() {
    let out = run(&["verify", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_bounds_negative_override_fails_with_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    // dropping the boundary exponent must make the fit fail => exit 1
    let out = run(&[
        "verify", "bounds", "--nu", "-0.75", "--k", "1", "--profile-ey", "0",
        "--out", dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    // the report still gets written
    assert!(dir.path().join("bounds.csv").exists());
}

#[test]
fn sweep_empty_p_list_is_exit_2() {
    let out = run(&["sweep", "--nu", "-0.75", "--k", "2", "--p", "", "--refine", "32,48"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_writes_rows_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "sweep", "--nu", "0.5", "--k", "1", "--p", "2", "--alpha", "0",
        "--refine", "32,48", "--out", dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap().trim_end(), "p,alpha,N,norm,verdict");
    assert_eq!(csv.lines().count(), 3); // header + two refinement rows
    assert!(dir.path().join("sweep_manifest.json").exists());
}

#[test]
fn identical_config_produces_byte_identical_csv() {
    let run_once = |dir: &Path| {
        let out = run(&[
            "verify", "bounds", "--nu", "-0.75", "--k", "1",
            "--out", dir.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        std::fs::read(dir.join("bounds.csv")).unwrap()
    };
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    let a = run_once(d1.path());
    let b = run_once(d2.path());
    assert_eq!(a, b, "two runs with identical config must emit identical bytes");
}
