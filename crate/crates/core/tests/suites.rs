//! The fast invariant suites run green and are reproducible for a fixed seed.

use kms_core::verify::{run_suite, Suite, DEFAULT_SEED};

#[test]
fn core_and_curve_suites_pass() {
    for suite in [Suite::Core, Suite::Curves] {
        for report in run_suite(suite, DEFAULT_SEED) {
            for c in &report.checks {
                assert!(c.passed, "{} / {}: {}", report.suite, c.name, c.detail);
            }
        }
    }
}

#[test]
fn same_seed_same_details() {
    let a = run_suite(Suite::Core, 7);
    let b = run_suite(Suite::Core, 7);
    let details = |r: &[kms_core::verify::SuiteReport]| -> Vec<String> {
        r.iter().flat_map(|s| s.checks.iter().map(|c| format!("{}: {}", c.name, c.detail))).collect()
    };
    assert_eq!(details(&a), details(&b));
}

#[test]
fn suite_names_parse() {
    for s in ["core", "curves", "cusps", "classify", "oracle", "all"] {
        assert_eq!(s.parse::<Suite>().unwrap().to_string(), s);
    }
    assert!("everything".parse::<Suite>().is_err());
}
