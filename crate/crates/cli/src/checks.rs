//! Checks of the command-line layer itself, run by `kms verify --suite all`
//! after the numerical suites.

use std::time::Instant;

use num_complex::Complex64;

use kms_core::borderline::trace_default;
use kms_core::classification::scan_path;
use kms_core::matrix::{Dimension, EigType};
use kms_core::verify::{CheckResult, Outcome};

use crate::output::{read_numeric_csv, write_curve_csv, write_scan_csv, CURVE_HEADER, SCAN_HEADER};
use crate::{render, Cli, CliError, Section};

/// Argument lists whose output must be byte-identical across runs.
pub const DETERMINISM_CASES: [&[&str]; 10] = [
    &["kms", "trace", "--n", "5", "--type", "2"],
    &["kms", "cusps", "--n", "7", "--type", "1"],
    &["kms", "classify", "--n", "5", "--rho", "1.2"],
    &["kms", "spectrum", "--n", "6", "--rho", "15+12i"],
    &["kms", "scan", "--n", "7", "--type", "1", "--start", "0.7757-1.4922i", "--dir", "i", "--from", "-0.02", "--to", "0.02", "--steps", "21"],
    &["kms", "regions", "--n", "5", "--resolution", "120"],
    &["kms", "figure", "--id", "curves", "--n", "5", "--resolution", "120"],
    &["kms", "figure", "--id", "phase", "--n", "6"],
    &["kms", "figure", "--id", "parabola", "--n", "7"],
    &["kms", "figure", "--id", "bifurcation", "--n", "7", "--steps", "41"],
];

pub fn cli_section() -> Section {
    let start = Instant::now();
    let checks = vec![
        CheckResult::new("curve csv round-trip", Ok(check_curve_csv())),
        CheckResult::new("scan csv round-trip", Ok(check_scan_csv())),
        CheckResult::new("output determinism", Ok(check_determinism())),
    ];
    Section { name: "cli".into(), checks, elapsed_secs: start.elapsed().as_secs_f64() }
}

fn failed(e: impl std::fmt::Display) -> Outcome {
    Err(e.to_string())
}

/// Values of `rows` that differ bit for bit from `expected`.
fn bit_mismatches(rows: &[Vec<f64>], expected: &[Vec<f64>]) -> usize {
    rows.iter()
        .zip(expected)
        .map(|(a, b)| a.iter().zip(b).filter(|(x, y)| x.to_bits() != y.to_bits()).count() + a.len().abs_diff(b.len()))
        .sum::<usize>()
        + rows.len().abs_diff(expected.len())
}

fn check_curve_csv() -> Outcome {
    let mut total = 0;
    for (n, t) in [(6, EigType::Type1), (9, EigType::Type2)] {
        let n = Dimension::new(n).expect("valid dimension");
        let curve = match trace_default(n, t) {
            Ok(c) => c,
            Err(e) => return failed(e),
        };
        let mut buf = Vec::new();
        if let Err(e) = write_curve_csv(&curve, &mut buf) {
            return failed(e);
        }
        if buf.contains(&b'\r') {
            return Err("CR found in curve CSV".into());
        }
        let rows = match read_numeric_csv(buf.as_slice(), &CURVE_HEADER) {
            Ok(r) => r,
            Err(e) => return failed(e),
        };
        let expected: Vec<Vec<f64>> = curve
            .samples
            .iter()
            .map(|s| vec![s.u, s.v, s.rho.re(), s.rho.im(), s.lambda.re(), s.lambda.im(), s.drho_du.re(), s.drho_du.im()])
            .collect();
        let bad = bit_mismatches(&rows, &expected);
        if bad > 0 {
            return Err(format!("n = {n} {t}: {bad} values differ after re-parsing"));
        }
        total += rows.len();
    }
    Ok(format!("{total} rows re-parsed bit-identically, LF line endings"))
}

fn check_scan_csv() -> Outcome {
    let n = Dimension::new(7).expect("valid dimension");
    let scan = match scan_path(n, EigType::Type1, Complex64::new(0.7757, -1.4922), Complex64::i(), (-0.05, 0.05), 51) {
        Ok(s) => s,
        Err(e) => return failed(e),
    };
    let mut buf = Vec::new();
    if let Err(e) = write_scan_csv(&scan, &mut buf) {
        return failed(e);
    }
    let rows = match read_numeric_csv(buf.as_slice(), &SCAN_HEADER) {
        Ok(r) => r,
        Err(e) => return failed(e),
    };
    let expected: Vec<Vec<f64>> = scan
        .distances
        .iter()
        .zip(&scan.pair_magnitudes)
        .zip(&scan.pairs)
        .map(|((&d, &(ma, mb)), (a, b))| vec![d, ma, mb, a.re(), a.im(), b.re(), b.im()])
        .collect();
    match bit_mismatches(&rows, &expected) {
        0 => Ok(format!("{} rows re-parsed bit-identically", rows.len())),
        bad => Err(format!("{bad} values differ after re-parsing")),
    }
}

/// Renders `argv` to bytes.
pub fn render_args(argv: &[&str]) -> Result<Vec<u8>, CliError> {
    use clap::Parser;
    let cli = Cli::try_parse_from(argv).map_err(|e| CliError::Usage(e.to_string()))?;
    render(&cli.command).map(|r| r.bytes)
}

fn check_determinism() -> Outcome {
    let mut bytes = 0;
    for argv in DETERMINISM_CASES {
        let first = render_args(argv).map_err(|e| format!("{}: {e}", argv.join(" ")))?;
        let second = render_args(argv).map_err(|e| format!("{}: {e}", argv.join(" ")))?;
        if first != second {
            return Err(format!("{}: outputs differ", argv.join(" ")));
        }
        bytes += first.len();
    }
    Ok(format!("{} commands rendered twice, {bytes} bytes identical", DETERMINISM_CASES.len()))
}
