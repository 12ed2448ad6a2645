//! The `kms` front end: argument handling, exit codes and output formats.

use kms_cli::output::{read_numeric_csv, CURVE_HEADER, SCAN_HEADER};
use kms_cli::{run, EXIT_FAILURE, EXIT_OK, EXIT_USAGE};
use kms_core::complex::parse_complex;
use num_complex::Complex64;
use serde_json::Value;

fn kms(args: &[&str]) -> (u8, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("kms").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn ok(args: &[&str]) -> String {
    let (code, out, err) = kms(args);
    assert_eq!(code, EXIT_OK, "{args:?}: {err}");
    out
}

#[test]
fn classify_table_row() {
    let v: Value = serde_json::from_str(&ok(&["classify", "--n", "5", "--rho", "1.2"])).unwrap();
    assert_eq!(v, serde_json::json!({"j1": 0, "j2": 1}));
    let v: Value = serde_json::from_str(&ok(&["classify", "--n", "6", "--rho", "-1.3"])).unwrap();
    assert_eq!(v, serde_json::json!({"j1": 1, "j2": 0}));
}

#[test]
fn classify_on_curve_reports_flag() {
    // rho = xi_6 = 1.4 is where the type-1 curve meets the real axis.
    let v: Value = serde_json::from_str(&ok(&["classify", "--n", "6", "--rho", "1.4"])).unwrap();
    assert_eq!(v["j1"], 0);
    assert_eq!(v["conjecture_dependent"], true);
}

#[test]
fn cusps_json_lists_the_singular_point() {
    let v: Value = serde_json::from_str(&ok(&["cusps", "--n", "7", "--type", "1"])).unwrap();
    let target = Complex64::new(0.77570, -1.49222);
    let best = v
        .as_array()
        .unwrap()
        .iter()
        .map(|c| (parse_complex(c["rho0"].as_str().unwrap()).unwrap() - target).norm())
        .fold(f64::INFINITY, f64::min);
    assert!(best < 5e-5, "{best}");
    assert_eq!(ok(&["cusps", "--n", "7", "--type", "1", "--json"]), ok(&["cusps", "--n", "7", "--type", "1"]));
}

#[test]
fn spectrum_of_identity() {
    let v: Value = serde_json::from_str(&ok(&["spectrum", "--n", "3", "--rho", "0"])).unwrap();
    let entries = v["eigenvalues"].as_array().unwrap();
    let total: u64 = entries.iter().map(|e| e["multiplicity"].as_u64().unwrap()).sum();
    assert_eq!(total, 3);
    assert!(entries.iter().all(|e| e["value"] == "1"));
    let raw: Value = serde_json::from_str(&ok(&["spectrum", "--n", "3", "--rho", "0", "--raw-roots"])).unwrap();
    assert_eq!(raw["type1"].as_array().unwrap().len() + raw["type2"].as_array().unwrap().len(), 3);
}

#[test]
fn trace_csv_format() {
    let out = ok(&["trace", "--n", "6", "--type", "1"]);
    assert!(!out.contains('\r'));
    assert_eq!(out.lines().next().unwrap(), "u,v,re_rho,im_rho,re_lambda,im_lambda,re_drho,im_drho");
    assert!(out.lines().any(|l| l.starts_with("0,0,1.4,0,-6,0,")), "no u = 0 row");
    let rows = read_numeric_csv(out.as_bytes(), &CURVE_HEADER).unwrap();
    let curve = kms_core::borderline::trace_default(kms_core::matrix::Dimension::new(6).unwrap(), kms_core::matrix::EigType::Type1)
        .unwrap();
    assert_eq!(rows.len(), curve.samples.len());
    for (row, s) in rows.iter().zip(&curve.samples) {
        assert_eq!(row[2].to_bits(), s.rho.re().to_bits());
        assert_eq!(row[3].to_bits(), s.rho.im().to_bits());
    }
    // Every field has at most 17 significant digits.
    for field in out.lines().skip(1).flat_map(|l| l.split(',')) {
        let mantissa = field.trim_start_matches('-').split(['e', 'E']).next().unwrap();
        let digits = mantissa.chars().filter(|c| c.is_ascii_digit()).collect::<String>();
        assert!(digits.trim_start_matches('0').len() <= 17, "{field}");
    }
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curve.csv");
    let p = path.to_str().unwrap();
    let (code, out, _) = kms(&["trace", "--n", "5", "--type", "2", "--samples", "256", "--out", p]);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), ok(&["trace", "--n", "5", "--type", "2", "--samples", "256"]));
}

#[test]
fn scan_csv_format() {
    let out = ok(&[
        "scan", "--n", "7", "--type", "1", "--start", "0.7757-1.4922i", "--dir", "-i", "--from", "-0.01", "--to", "0.01",
        "--steps", "5",
    ]);
    let rows = read_numeric_csv(out.as_bytes(), &SCAN_HEADER).unwrap();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0][0], -0.01);
    assert_eq!(rows[4][0], 0.01);
}

#[test]
fn regions_json() {
    let v: Value = serde_json::from_str(&ok(&["regions", "--n", "5", "--resolution", "160"])).unwrap();
    let labels: Vec<&Value> = v.as_array().unwrap().iter().map(|r| &r["label"]).collect();
    for want in [[0, 0], [1, 1], [1, 0], [0, 1]] {
        assert!(labels.iter().any(|l| **l == serde_json::json!(want)), "{want:?} missing");
    }
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["classify", "--n", "5", "--rho", "1.2x"][..],
        &["classify", "--n", "5"],
        &["classify", "--n", "1", "--rho", "0"],
        &["classify", "--n", "5", "--rho", "0", "--bogus"],
        &["trace", "--n", "5", "--type", "3"],
        &["scan", "--n", "7", "--type", "1", "--start", "0", "--dir", "0", "--from", "0", "--to", "1", "--steps", "3"],
        &["scan", "--n", "7", "--type", "1", "--start", "0", "--dir", "1", "--from", "0", "--to", "1", "--steps", "1"],
        &["verify", "--suite", "everything"],
        &["figure", "--id", "maps", "--n", "5"],
        &[],
    ] {
        let (code, out, err) = kms(args);
        assert_eq!(code, EXIT_USAGE, "{args:?}");
        assert!(out.is_empty());
        assert!(!err.is_empty());
    }
}

#[test]
fn numerical_failure_exits_1() {
    let (code, out, err) = kms(&["spectrum", "--n", "40", "--rho", "1e200"]);
    assert_eq!(code, EXIT_FAILURE);
    assert!(out.is_empty());
    assert!(err.contains("overflow"), "{err}");
}

#[test]
fn help_exits_0() {
    let (code, out, _) = kms(&["--help"]);
    assert_eq!(code, EXIT_OK);
    for sub in ["trace", "cusps", "classify", "spectrum", "scan", "regions", "verify", "figure"] {
        assert!(out.contains(sub), "{sub}");
    }
}

#[test]
fn figures() {
    let curves = ok(&["figure", "--id", "curves", "--n", "5", "--resolution", "160"]);
    assert!(curves.starts_with("<?xml"));
    assert_eq!(curves.matches("<polyline class=\"curve type-").count(), 2);
    assert!(curves.contains(">[1,0]</text>"));
    assert!(curves.contains("stroke-dasharray"));
    let phase = ok(&["figure", "--id", "phase", "--n", "6"]);
    assert_eq!(phase.matches("class=\"jump\"").count(), 4);
    let parabola = ok(&["figure", "--id", "parabola", "--n", "7"]);
    assert!(parabola.contains("class=\"parabola\"") && parabola.contains("1.3333"));
    let bif = ok(&["figure", "--id", "bifurcation", "--n", "7", "--steps", "21"]);
    assert!(bif.contains("0.77570-1.49222i"));
    assert!(curves.is_ascii() && phase.is_ascii() && parabola.is_ascii() && bif.is_ascii());
}

#[test]
fn identical_arguments_identical_bytes() {
    for argv in kms_cli::checks::DETERMINISM_CASES {
        let a = kms_cli::checks::render_args(argv).unwrap();
        let b = kms_cli::checks::render_args(argv).unwrap();
        assert_eq!(a, b, "{argv:?}");
    }
}

#[test]
fn verify_single_suite() {
    let out = ok(&["verify", "--suite", "curves"]);
    assert!(out.starts_with("== curves"));
    assert!(out.trim_end().ends_with("0 failed"));
}
