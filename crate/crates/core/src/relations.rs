//! Transcendental relations between the mode parameter `mu`, the matrix
//! parameter `rho` and the eigenvalue `lambda`, the repeated-eigenvalue
//! condition, and the leading-order spectrum for large `|rho|`.
//!
//! A type-1 eigenvalue is `lambda = -sin(n mu)/sin(mu)` with
//! `rho = sin((n+1)mu/2) / sin((n-1)mu/2)`; type 2 flips the sign of
//! `lambda` and uses cosines in `rho`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{dirichlet_ratio, powers, xi, Dimension, EigType};
use crate::trig::{cos_half, sin_half, Scaled};

/// `mu = u + i v` for a fixed dimension, with `u` reduced to `(-pi, pi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeParameter {
    pub mu: Complex64,
    pub n: Dimension,
}

impl ModeParameter {
    pub fn new(n: Dimension, mu: Complex64) -> Self {
        let mut u = mu.re.rem_euclid(2.0 * PI);
        if u > PI {
            u -= 2.0 * PI;
        }
        ModeParameter { mu: Complex64::new(u, mu.im), n }
    }

    pub fn u(&self) -> f64 {
        self.mu.re
    }

    pub fn v(&self) -> f64 {
        self.mu.im
    }
}

/// The values of `rho` excluded from the double-eigenvalue equivalence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExceptionalRho {
    MinusXi,
    MinusOne,
    Zero,
    One,
    Xi,
}

/// Classifies `rho` against `{-xi_n, -1, 0, 1, xi_n}`. Comparison is exact
/// up to a few ulps so that parsed literals such as `1.4` hit `xi_6`.
pub fn exceptional_rho(n: Dimension, rho: Complex64) -> Option<ExceptionalRho> {
    let x = xi(n);
    let hit = |target: f64| (rho - target).norm() <= 4.0 * f64::EPSILON * target.abs().max(1.0);
    if hit(0.0) {
        Some(ExceptionalRho::Zero)
    } else if hit(1.0) {
        Some(ExceptionalRho::One)
    } else if hit(-1.0) {
        Some(ExceptionalRho::MinusOne)
    } else if hit(x) {
        Some(ExceptionalRho::Xi)
    } else if hit(-x) {
        Some(ExceptionalRho::MinusXi)
    } else {
        None
    }
}

pub fn lambda_of_mu(m: ModeParameter, t: EigType) -> Complex64 {
    let d = dirichlet_ratio(m.n, m.mu);
    match t {
        EigType::Type1 => -d,
        EigType::Type2 => d,
    }
}

const TINY: f64 = 1e-12;

pub fn rho_of_mu(m: ModeParameter, t: EigType) -> Result<Complex64> {
    let n = m.n.get() as i64;
    let (num, den) = match t {
        EigType::Type1 => (sin_half(n + 1, m.mu), sin_half(n - 1, m.mu)),
        EigType::Type2 => (cos_half(n + 1, m.mu), cos_half(n - 1, m.mu)),
    };
    if den.ln_abs() >= TINY.ln() {
        return Ok(num.div(den));
    }
    if num.ln_abs() >= TINY.ln() {
        return Err(Error::Pole { what: "rho(mu)", mu: m.mu });
    }
    // 0/0: ratio of derivatives. Second derivatives vanish at the common
    // zeros, so the error is quadratic in the distance to the zero.
    let (a, b) = ((n + 1) as f64, (n - 1) as f64);
    let (dn, dd) = match t {
        EigType::Type1 => (cos_half(n + 1, m.mu), cos_half(n - 1, m.mu)),
        EigType::Type2 => (sin_half(n + 1, m.mu), sin_half(n - 1, m.mu)),
    };
    Ok(dn.div(dd) * (a / b))
}

/// Residual of the repeated-eigenvalue condition
/// `xi_n C(n+1) = rho C(n-1)` (cosines for type 1, sines for type 2).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DoubleCondition {
    pub residual: f64,
    /// `residual / (|xi_n C(n+1)| + |rho C(n-1)|)`.
    pub relative: f64,
    /// `rho = ±xi_n`: the condition can hold while `-n` is simple.
    pub exceptional_rho: bool,
}

pub fn double_condition_residual(
    m: ModeParameter,
    rho: Complex64,
    t: EigType,
) -> Result<DoubleCondition> {
    let exceptional = exceptional_rho(m.n, rho);
    if matches!(
        exceptional,
        Some(ExceptionalRho::MinusOne | ExceptionalRho::Zero | ExceptionalRho::One)
    ) {
        return Err(Error::ExcludedRho(rho));
    }
    let n = m.n.get() as i64;
    let (plus, minus) = match t {
        EigType::Type1 => (cos_half(n + 1, m.mu), cos_half(n - 1, m.mu)),
        EigType::Type2 => (sin_half(n + 1, m.mu), sin_half(n - 1, m.mu)),
    };
    let e = plus.exponent.max(minus.exponent);
    let rescale = |s: Scaled| s.mantissa * (s.exponent - e).exp();
    let lhs = xi(m.n) * rescale(plus);
    let rhs = rho * rescale(minus);
    let diff = (lhs - rhs).norm();
    let size = lhs.norm() + rhs.norm();
    Ok(DoubleCondition {
        residual: diff * e.exp(),
        relative: if size > 0.0 { diff / size } else { 0.0 },
        exceptional_rho: exceptional.is_some(),
    })
}

/// Leading-order spectrum for large `|rho|`: two extraordinary eigenvalues
/// `±rho^(n-1)` and `n-2` eigenvalues near `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticSpectrum {
    pub lambda0: Complex64,
    pub lambda1: Complex64,
    pub bulk_value: Complex64,
    pub bulk_count: usize,
}

impl AsymptoticSpectrum {
    /// Product of all approximate eigenvalues.
    pub fn product(&self) -> Complex64 {
        self.lambda0 * self.lambda1 * self.bulk_value.powi(self.bulk_count as i32)
    }
}

pub fn asymptotic_spectrum(n: Dimension, rho: Complex64) -> AsymptoticSpectrum {
    let top = powers(rho, n.get())[n.get() - 1];
    AsymptoticSpectrum {
        lambda0: top,
        lambda1: -top,
        bulk_value: Complex64::new(-1.0, 0.0),
        bulk_count: n.get() - 2,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EigenClass {
    Ordinary,
    Borderline,
    Extraordinary,
}

/// Default width of the borderline band, `1e-9 n`.
pub fn default_borderline_tol(n: Dimension) -> f64 {
    1e-9 * n.as_f64()
}

pub fn classify_eigenvalue(lambda: Complex64, n: Dimension, tol: f64) -> EigenClass {
    let mag = lambda.norm();
    if (mag - n.as_f64()).abs() <= tol {
        EigenClass::Borderline
    } else if mag > n.as_f64() {
        EigenClass::Extraordinary
    } else {
        EigenClass::Ordinary
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dim(n: usize) -> Dimension {
        Dimension::new(n).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn mode(n: usize, mu: Complex64) -> ModeParameter {
        ModeParameter::new(dim(n), mu)
    }

    #[test]
    fn u_is_reduced() {
        let m = mode(5, c(3.0 * PI / 2.0, 0.25));
        assert!((m.u() + PI / 2.0).abs() < 1e-15);
        assert_eq!(m.v(), 0.25);
        assert_eq!(mode(5, c(PI, 0.0)).u(), PI);
    }

    #[test]
    fn lambda_at_zero() {
        assert_eq!(lambda_of_mu(mode(6, c(0.0, 0.0)), EigType::Type1), c(-6.0, 0.0));
        assert_eq!(lambda_of_mu(mode(6, c(0.0, 0.0)), EigType::Type2), c(6.0, 0.0));
    }

    #[test]
    fn rho_limits_on_the_axis() {
        let r1 = rho_of_mu(mode(6, c(0.0, 0.0)), EigType::Type1).unwrap();
        assert!((r1 - c(7.0 / 5.0, 0.0)).norm() < 1e-15);
        let r2 = rho_of_mu(mode(6, c(0.0, 0.0)), EigType::Type2).unwrap();
        assert!((r2 - c(1.0, 0.0)).norm() < 1e-15);
        // u = pi: type 1 gives -1 (n even) / -xi_n (n odd), type 2 the reverse.
        for n in 2..=9usize {
            let x = xi(dim(n));
            let (e1, e2) = if n % 2 == 0 { (-1.0, -x) } else { (-x, -1.0) };
            let r1 = rho_of_mu(mode(n, c(PI, 0.0)), EigType::Type1).unwrap();
            let r2 = rho_of_mu(mode(n, c(PI, 0.0)), EigType::Type2).unwrap();
            assert!((r1 - c(e1, 0.0)).norm() < 1e-12, "n={n} type1 {r1}");
            assert!((r2 - c(e2, 0.0)).norm() < 1e-12, "n={n} type2 {r2}");
        }
    }

    #[test]
    fn rho_satisfies_defining_equation() {
        let mu = c(0.5, 0.3);
        let rho = rho_of_mu(mode(5, mu), EigType::Type1).unwrap();
        let resid = (rho * (2.0 * mu).sin() - (3.0 * mu).sin()).norm();
        assert!(resid < 1e-12);
        let rho2 = rho_of_mu(mode(5, mu), EigType::Type2).unwrap();
        assert!((rho2 * (2.0 * mu).cos() - (3.0 * mu).cos()).norm() < 1e-12);
    }

    #[test]
    fn pole_is_reported() {
        // sin(2 mu) = 0 at mu = pi/2 for n = 5 while sin(3 mu) = -1.
        let err = rho_of_mu(mode(5, c(PI / 2.0, 0.0)), EigType::Type1).unwrap_err();
        assert!(matches!(err, Error::Pole { .. }));
    }

    #[test]
    fn double_condition_excludes_unit_and_zero() {
        for rho in [c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)] {
            assert_eq!(
                double_condition_residual(mode(5, c(0.3, 0.1)), rho, EigType::Type1),
                Err(Error::ExcludedRho(rho))
            );
        }
    }

    #[test]
    fn double_condition_at_xi_is_flagged() {
        let n = dim(6);
        let d = double_condition_residual(ModeParameter::new(n, c(0.0, 0.0)), c(xi(n), 0.0), EigType::Type1)
            .unwrap();
        assert!(d.residual < 1e-15);
        assert!(d.exceptional_rho);
    }

    #[test]
    fn double_condition_off_relation_is_large() {
        // Arbitrary (mu, rho) pairs; values checked by direct evaluation.
        let cases = [
            (5, c(0.4, 0.2), c(0.3, 0.9), EigType::Type1),
            (7, c(-1.2, 0.5), c(2.0, -1.0), EigType::Type2),
            (4, c(2.5, 0.1), c(-0.7, 0.2), EigType::Type1),
            (9, c(0.9, 1.1), c(1.5, 1.5), EigType::Type2),
        ];
        for (n, mu, rho, t) in cases {
            let np = n as f64;
            let direct = match t {
                EigType::Type1 => xi(dim(n)) * ((np + 1.0) * mu / 2.0).cos() - rho * ((np - 1.0) * mu / 2.0).cos(),
                EigType::Type2 => xi(dim(n)) * ((np + 1.0) * mu / 2.0).sin() - rho * ((np - 1.0) * mu / 2.0).sin(),
            };
            let d = double_condition_residual(mode(n, mu), rho, t).unwrap();
            assert!((d.residual - direct.norm()).abs() < 1e-12 * (1.0 + direct.norm()));
            assert!(d.residual > 0.1, "n={n} mu={mu} residual {}", d.residual);
        }
    }

    #[test]
    fn asymptotic_values() {
        let a = asymptotic_spectrum(dim(95), c(0.0, 1.2));
        assert!(a.lambda0.im.abs() < 1e-9 * a.lambda0.norm());
        assert!(a.lambda0.re < 0.0);
        assert!((a.lambda0.norm() - 1.2f64.powi(94)).abs() < 1e-9 * a.lambda0.norm());
        assert_eq!(a.bulk_value, c(-1.0, 0.0));
        assert_eq!(a.bulk_count, 93);
    }

    #[test]
    fn classification_bands() {
        let n = dim(6);
        assert_eq!(classify_eigenvalue(c(-6.0, 0.0), n, 1e-9), EigenClass::Borderline);
        let big = c(0.0, 2.0).powi(4);
        assert_eq!(classify_eigenvalue(big, dim(5), 1e-9), EigenClass::Extraordinary);
        assert_eq!(classify_eigenvalue(c(-1.0, 0.0), dim(5), 1e-9), EigenClass::Ordinary);
    }

    proptest! {
        #[test]
        fn relations_are_even_in_mu(u in -3.1f64..3.1, v in -2.0f64..2.0, n in 3usize..=10) {
            let m = mode(n, c(u, v));
            let mneg = mode(n, c(-u, -v));
            for t in EigType::BOTH {
                let l = lambda_of_mu(m, t);
                let ln = lambda_of_mu(mneg, t);
                prop_assert!((l - ln).norm() <= 1e-13 * (1.0 + l.norm()));
                if let (Ok(r), Ok(rn)) = (rho_of_mu(m, t), rho_of_mu(mneg, t)) {
                    prop_assert!((r - rn).norm() <= 1e-13 * (1.0 + r.norm()));
                }
            }
        }

        #[test]
        fn asymptotic_product_matches_determinant_leading_term(re in -5.0f64..5.0, im in -5.0f64..5.0, n in 2usize..=12) {
            let rho = c(re, im);
            let a = asymptotic_spectrum(dim(n), rho);
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let expect = -rho.powi(2 * n as i32 - 2) * sign;
            prop_assert!((a.product() - expect).norm() <= 1e-12 * (1.0 + expect.norm()));
        }
    }
}
