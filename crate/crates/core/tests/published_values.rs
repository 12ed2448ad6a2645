//! Numbers that can be checked against closed forms or against the printed
//! coordinates of the singular points, each through the public API only.

use std::f64::consts::PI;

use kms_core::borderline::f_curve;
use kms_core::classification::{count_extraordinary, oracle_counts, real_axis_counts, scan_path};
use kms_core::matrix::{xi, Dimension, EigType};
use kms_core::oracle::{full_spectrum, spectrum_split};
use kms_core::relations::{default_borderline_tol, EigenClass};
use kms_core::singularities::{find_cusps, verify_double, CuspReport};
use num_complex::Complex64;

fn dim(n: usize) -> Dimension {
    Dimension::new(n).unwrap()
}

fn nearest(cusps: &[CuspReport], z: Complex64) -> &CuspReport {
    cusps.iter().min_by(|a, b| (a.rho0.0 - z).norm().total_cmp(&(b.rho0.0 - z).norm())).unwrap()
}

#[test]
fn axis_crossings_match_closed_forms() {
    for n in (2..=12).map(dim) {
        let x = xi(n);
        // (type-1 at u = 0, type-1 at u = pi, type-2 at u = 0, type-2 at u = pi)
        let expected = if n.is_even() { [x, -1.0, 1.0, -x] } else { [x, -x, 1.0, -1.0] };
        let got = [
            f_curve(n, 0.0, EigType::Type1).unwrap(),
            f_curve(n, PI, EigType::Type1).unwrap(),
            f_curve(n, 0.0, EigType::Type2).unwrap(),
            f_curve(n, PI, EigType::Type2).unwrap(),
        ];
        for (g, e) in got.iter().zip(expected) {
            assert!((g - e).norm() < 1e-10, "n = {n}: {g} vs {e}");
        }
    }
}

#[test]
fn printed_cusp_coordinates() {
    let c5 = find_cusps(dim(5), EigType::Type1).unwrap();
    for z in [Complex64::new(0.0, 2.0), Complex64::new(0.0, -2.0)] {
        assert!((nearest(&c5, z).rho0.0 - z).norm() < 1e-8);
    }
    let c7 = find_cusps(dim(7), EigType::Type1).unwrap();
    let z7 = Complex64::new(0.77570, -1.49222);
    assert!((nearest(&c7, z7).rho0.0 - z7).norm() < 5e-5);
    let c6 = find_cusps(dim(6), EigType::Type2).unwrap();
    assert_eq!(c6.len(), 4);
    for z in [(1.31, 1.12), (1.31, -1.12), (-0.51, 1.74), (-0.51, -1.74)].map(|(a, b)| Complex64::new(a, b)) {
        assert!((nearest(&c6, z).rho0.0 - z).norm() < 5e-3, "{z}");
    }
}

#[test]
fn large_n_imaginary_axis_cusp_is_a_double_eigenvalue() {
    let n = dim(95);
    let cusps = find_cusps(n, EigType::Type2).unwrap();
    let c = nearest(&cusps, Complex64::new(0.0, 1.068));
    assert!(c.rho0.re().abs() < 1e-12);
    assert!((c.rho0.im() - 1.06799).abs() < 5e-6, "{}", c.rho0);
    assert!(verify_double(n, c.rho0.0).unwrap().verdict);

    // Conjugate pair inside, two real negative eigenvalues outside.
    let scan = scan_path(n, EigType::Type2, c.rho0.0, Complex64::i(), (-1e-3, 1e-3), 21).unwrap();
    for (d, (a, b)) in scan.distances.iter().zip(&scan.pairs) {
        let (a, b) = (a.0, b.0);
        if *d < -1e-9 {
            assert!((a - b.conj()).norm() < 1e-8 * 95.0, "d = {d}: {a} {b}");
            assert!(a.im.abs() > 1.0);
        } else if *d > 1e-9 {
            assert!(a.re < 0.0 && b.re < 0.0 && a.im.abs() < 1e-6 && b.im.abs() < 1e-6, "d = {d}: {a} {b}");
            assert!((a.re - b.re).abs() > 1.0);
        }
    }
}

#[test]
fn large_rho_asymptotics() {
    let n = dim(6);
    let rho = Complex64::new(15.0, 12.0);
    let report = full_spectrum(n, rho, default_borderline_tol(n)).unwrap();
    let extra: Vec<Complex64> = report
        .eigenvalues
        .iter()
        .filter(|e| e.class == EigenClass::Extraordinary)
        .map(|e| e.value.0)
        .collect();
    assert_eq!(extra.len(), 2);
    let r5 = rho.powu(5).re;
    let mut re: Vec<f64> = extra.iter().map(|z| z.re).collect();
    re.sort_by(f64::total_cmp);
    // Three significant digits.
    assert!((re[0] + r5.abs()).abs() / r5.abs() < 5e-3 && (re[1] - r5.abs()).abs() / r5.abs() < 5e-3, "{re:?} vs {r5}");
    // One of each type.
    let split = spectrum_split(n, rho).unwrap();
    assert_eq!(oracle_counts(n, rho).unwrap(), [1, 1]);
    assert_eq!(split.type1.len() + split.type2.len(), 6);
    let furthest = report
        .values()
        .into_iter()
        .filter(|z| z.norm() <= 6.0)
        .max_by(|a, b| (a + 1.0).norm().total_cmp(&(b + 1.0).norm()))
        .unwrap();
    assert!((furthest.re + 1.07).abs() < 5e-3 && (furthest.im - 0.05).abs() < 5e-3, "{furthest}");
}

#[test]
fn real_axis_table_rows() {
    assert_eq!(count_extraordinary(dim(5), Complex64::new(1.2, 0.0)).unwrap(), [0, 1]);
    assert_eq!(count_extraordinary(dim(6), Complex64::new(-1.3, 0.0)).unwrap(), [1, 0]);
    for n in (2..=10).map(dim) {
        for k in 0..200 {
            let r = -3.0 + 6.0 * k as f64 / 199.0;
            let x = xi(n);
            if [1.0, -1.0, x, -x].iter().any(|e| (r - e).abs() < 1e-9) {
                continue;
            }
            assert_eq!(real_axis_counts(n, r), oracle_counts(n, Complex64::new(r, 0.0)).unwrap(), "n = {n}, rho = {r}");
        }
    }
}
