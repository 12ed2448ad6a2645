//! Characteristic polynomial of `K_n(rho)` by the Faddeev-LeVerrier
//! trace recurrence, and its roots.
//!
//! The recurrence is exact in exact arithmetic but loses digits quickly in
//! floating point once the entries of `K_n(rho)` spread over many orders of
//! magnitude. Every result is therefore checked against the closed-form
//! constant term `(-1)^n (1 - rho^2)^(n-1)` and refused when the check fails.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::roots::{aberth, circle_guesses, cluster_roots, Evaluate, PolyEval, Root};
use crate::complex::ComplexPoint;
use crate::error::{Error, Result};
use crate::matrix::{build_kms, powers, DenseMatrix, Dimension};

/// Largest relative error of the constant term accepted by [`char_poly`].
pub const CHARPOLY_SELF_CHECK: f64 = 1e-8;

/// Monic characteristic polynomial, coefficients in descending powers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharPoly {
    pub n: Dimension,
    pub rho: ComplexPoint,
    pub coeffs: Vec<Complex64>,
}

impl CharPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `(p(z), p'(z))` by Horner's rule.
    pub fn eval(&self, z: Complex64) -> (Complex64, Complex64) {
        let e = Evaluate::eval(self, z);
        (e.value, e.deriv)
    }

    /// `sum |c_k| |z|^k`, the natural scale for `|p(z)|`.
    pub fn scale(&self, z: Complex64) -> f64 {
        Evaluate::eval(self, z).bound
    }
}

impl Evaluate for CharPoly {
    fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    fn eval(&self, z: Complex64) -> PolyEval {
        let zn = z.norm();
        let mut value = Complex64::new(0.0, 0.0);
        let mut deriv = Complex64::new(0.0, 0.0);
        let mut bound = 0.0;
        for c in &self.coeffs {
            deriv = deriv * z + value;
            value = value * z + c;
            bound = bound * zn + c.norm();
        }
        PolyEval { value, deriv, bound }
    }
}

/// `det(lambda I - K_n(rho))` by Faddeev-LeVerrier.
pub fn char_poly(n: Dimension, rho: Complex64) -> Result<CharPoly> {
    let dim = n.get();
    let a = build_kms(n, rho).entries;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); dim + 1];
    coeffs[0] = Complex64::new(1.0, 0.0);
    // m_k = A m_{k-1} + c_{k-1} I, c_k = -tr(A m_k) / k
    let mut m = DenseMatrix::zeros(dim);
    for k in 1..=dim {
        for j in 0..dim {
            m[(j, j)] += coeffs[k - 1];
        }
        let am = a.mul(&m);
        coeffs[k] = -am.trace() / k as f64;
        if !coeffs[k].is_finite() {
            return Err(Error::Overflow("characteristic polynomial"));
        }
        m = am;
    }
    let expected = {
        let c = 1.0 - rho * rho;
        let sign = if dim % 2 == 0 { 1.0 } else { -1.0 };
        sign * powers(c, dim)[dim - 1]
    };
    let err = (coeffs[dim] - expected).norm();
    let rel = if expected.norm() > 0.0 { err / expected.norm() } else { err };
    if !(rel <= CHARPOLY_SELF_CHECK || err <= 1e-10) {
        return Err(Error::PrecisionLoss { what: "characteristic polynomial", rel_err: rel });
    }
    Ok(CharPoly { n, rho: ComplexPoint(rho), coeffs })
}

/// All roots of a monic polynomial with multiplicities.
///
/// Roots closer than [`super::cluster_radius`] are merged. `tol` is the
/// relative correction size at which the iteration stops.
pub fn poly_roots(p: &CharPoly, tol: f64) -> Result<Vec<Root>> {
    raw_poly_roots(p, tol).map(|r| cluster_roots(&r))
}

/// Roots without clustering.
pub fn raw_poly_roots(p: &CharPoly, tol: f64) -> Result<Vec<Complex64>> {
    let deg = p.degree();
    if deg == 0 {
        return Err(Error::InvalidArgument("polynomial of degree 0 has no roots".into()));
    }
    // Fujiwara's bound on the root moduli.
    let radius = (1..=deg)
        .map(|k| {
            let c = p.coeffs[k].norm();
            let c = if k == deg { c / 2.0 } else { c };
            c.powf(1.0 / k as f64)
        })
        .fold(0.0_f64, f64::max)
        * 2.0;
    let center = -p.coeffs[1] / deg as f64;
    let guesses = circle_guesses(deg, center, radius.max(1e-3));
    aberth(p, guesses, tol)
}
