//! The curve, cusp and counting layers checked against the dense oracle on
//! random inputs.

use kms_core::borderline::{curve_sample, trace_default};
use kms_core::classification::{oracle_counts, Classifier, Membership};
use kms_core::matrix::{build_kms, Dimension, EigType};
use kms_core::oracle::{char_poly, full_spectrum, poly_roots, spectrum_split};
use kms_core::relations::{default_borderline_tol, lambda_of_mu, rho_of_mu, ModeParameter};
use kms_core::verify::multiset_distance;
use num_complex::Complex64;
use proptest::prelude::*;

fn dim(n: usize) -> Dimension {
    Dimension::new(n).unwrap()
}

fn type_of(n: Dimension, rho: Complex64, lambda: Complex64) -> EigType {
    let s = spectrum_split(n, rho).unwrap();
    let d = |v: &[Complex64]| v.iter().map(|z| (z - lambda).norm()).fold(f64::INFINITY, f64::min);
    if d(&s.type1) < d(&s.type2) {
        EigType::Type1
    } else {
        EigType::Type2
    }
}

#[test]
fn two_by_two_closed_form() {
    let rho = Complex64::new(0.3, -0.8);
    let s = spectrum_split(dim(2), rho).unwrap();
    assert!((s.type2[0] - (1.0 + rho)).norm() < 1e-14);
    assert!((s.type1[0] - (1.0 - rho)).norm() < 1e-14);
}

#[test]
fn identity_and_double_root() {
    let r = full_spectrum(dim(5), Complex64::new(0.0, 0.0), 1e-6).unwrap();
    // Multiplicities are counted per symmetry block: 2 skew plus 3 symmetric.
    assert_eq!(r.total_multiplicity(), 5);
    assert!(r.eigenvalues.iter().all(|e| e.value.0 == Complex64::new(1.0, 0.0)));
    let per_type: Vec<usize> = EigType::BOTH
        .iter()
        .map(|t| r.eigenvalues.iter().filter(|e| e.eig_type == *t).map(|e| e.multiplicity).sum())
        .collect();
    assert_eq!(per_type, [2, 3]);
    let r = full_spectrum(dim(5), Complex64::new(0.0, 2.0), 1e-6).unwrap();
    let double: Vec<_> = r.eigenvalues.iter().filter(|e| e.multiplicity == 2).collect();
    assert_eq!(double.len(), 1);
    assert!((double[0].value.0 + 5.0).norm() < 1e-6);
}

#[test]
fn traced_curves_carry_borderline_eigenvalues_of_their_type() {
    for n in (3..=8).map(dim) {
        for t in EigType::BOTH {
            let curve = trace_default(n, t).unwrap();
            for s in curve.samples.iter().step_by(curve.samples.len() / 40) {
                let rho = s.rho.0;
                let lambda = s.lambda.0;
                assert!((lambda.norm() - n.as_f64()).abs() < 1e-9 * n.as_f64());
                let all = full_spectrum(n, rho, default_borderline_tol(n)).unwrap().values();
                let gap = all.iter().map(|z| (z - lambda).norm()).fold(f64::INFINITY, f64::min);
                // Near a cusp the double root splits at square-root rate.
                assert!(gap < 1e-5 * n.as_f64(), "n = {n} {t}: gap {gap} at rho = {rho}");
                if gap < 1e-9 * n.as_f64() {
                    assert_eq!(type_of(n, rho, lambda), t);
                }
            }
        }
    }
}

#[test]
fn counting_off_curves_matches_oracle() {
    for n in [3, 5, 6, 9].map(dim) {
        let c = Classifier::new(n).unwrap();
        for k in 0..120 {
            let a = k as f64 * 2.399_963;
            let r = 3.0 * ((k as f64 + 0.5) / 120.0).sqrt();
            let rho = Complex64::from_polar(r, a);
            if c.distance(rho) < 1e-3 {
                continue;
            }
            let q = c.query(rho).unwrap();
            assert!(q.membership.iter().all(|m| *m != Membership::OnCurve));
            assert_eq!(q.counts, oracle_counts(n, rho).unwrap(), "n = {n}, rho = {rho}");
        }
    }
}

#[test]
fn on_curve_point_gets_zero_with_flag() {
    let n = dim(6);
    let c = Classifier::new(n).unwrap();
    let rho = curve_sample(n, 0.7, EigType::Type1).unwrap().rho.0;
    let q = c.query(rho).unwrap();
    assert_eq!(q.membership[0], Membership::OnCurve);
    assert_eq!(q.counts[0], 0);
    assert!(q.conjecture_dependent);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn blocks_match_dense_polynomial_for_small_n(n in 2usize..=5, re in -1.5f64..1.5, im in -1.5f64..1.5) {
        let n = dim(n);
        let rho = Complex64::new(re, im);
        prop_assume!((rho * rho - 1.0).norm() > 1e-2);
        let s = spectrum_split(n, rho).unwrap();
        let blocks: Vec<Complex64> = s.type1.iter().chain(&s.type2).copied().collect();
        let p = char_poly(n, rho).unwrap();
        let dense: Vec<Complex64> = poly_roots(&p, 1e-14)
            .unwrap()
            .into_iter()
            .flat_map(|r| std::iter::repeat(r.value.0).take(r.multiplicity))
            .collect();
        // Clustered roots may sit up to the square root of the precision apart.
        prop_assert!(multiset_distance(&blocks, &dense) < 1e-6);
    }

    #[test]
    fn trace_equals_n(n in 2usize..=16, re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let n = dim(n);
        let rho = Complex64::new(re, im);
        let s = spectrum_split(n, rho).unwrap();
        let sum: Complex64 = s.type1.iter().chain(&s.type2).sum();
        let scale = build_kms(n, rho).entries.inf_norm();
        prop_assert!((sum - n.as_f64()).norm() < 1e-11 * scale * n.as_f64());
    }

    #[test]
    fn mode_parameter_gives_an_eigenvalue(n in 3usize..=9, u in 0.1f64..3.0, v in -1.0f64..1.0) {
        let n = dim(n);
        let m = ModeParameter::new(n, Complex64::new(u, v));
        for t in EigType::BOTH {
            if let Ok(rho) = rho_of_mu(m, t) {
                prop_assume!(rho.norm() < 4.0 && (rho * rho - 1.0).norm() > 1e-3);
                let lambda = lambda_of_mu(m, t);
                let roots = spectrum_split(n, rho).unwrap();
                let gap = roots.of(t).iter().map(|z| (z - lambda).norm()).fold(f64::INFINITY, f64::min);
                prop_assert!(gap < 1e-7 * n.as_f64().max(lambda.norm()), "gap {}", gap);
            }
        }
    }
}

#[test]
fn unrepresentable_spectrum_is_an_overflow() {
    let err = spectrum_split(dim(40), Complex64::new(1e200, 0.0)).unwrap_err();
    assert_eq!(err, kms_core::error::Error::Overflow("block eigenvalues"));
}
