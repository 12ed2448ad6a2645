//! The borderline curves `B_n^(1)` and `B_n^(2)`.
//!
//! For each `u` in `(-pi, pi]` the equation
//!
//! ```text
//! sinh^2(n v) - n^2 sinh^2(v) = g_n(u) = n^2 sin^2(u) - sin^2(n u),   v >= 0
//! ```
//!
//! has a unique root `v(n, u)`. With `mu = u + i v` the point
//! `f_n^(k)(u) = rho(mu)` lies on `B_n^(k)` and `b_n^(k)(u) = lambda(mu)` is
//! the corresponding eigenvalue, of modulus exactly `n`.
//!
//! Both sides of the equation are differences of nearly equal terms when
//! `u` is near `0` or `±pi`. They are evaluated as products
//! `(a - b)(a + b)` whose small factor comes from a cancellation-free
//! series, which keeps `v` accurate to a few ulps all the way to the axis.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::complex::ComplexPoint;
use crate::error::{Error, Result};
use crate::matrix::{xi, Dimension, EigType};
use crate::relations::{lambda_of_mu, rho_of_mu, ModeParameter};
use crate::trig::{cos_half, sin_half};

/// Residual tolerance used by the curve evaluators.
pub const SOLVE_TOL: f64 = 1e-12;
const BISECTION_STEPS: usize = 60;
const NEWTON_STEPS: usize = 5;
const MAX_REFINE_DEPTH: usize = 20;

/// `u` wrapped to `(-pi, pi]`.
pub fn wrap_u(u: f64) -> f64 {
    if (-PI..=PI).contains(&u) && u != -PI {
        return u;
    }
    let mut w = u.rem_euclid(2.0 * PI);
    if w > PI {
        w -= 2.0 * PI;
    }
    w
}

/// Representative of `u` in `[0, pi/2]` under `u -> -u` and `u -> pi - u`,
/// both of which leave `g_n(u)` and `v(n, u)` unchanged.
fn fold_u(u: f64) -> f64 {
    let a = wrap_u(u).abs();
    if a > FRAC_PI_2 {
        PI - a
    } else {
        a
    }
}

/// Odd power series `sum_{k>=1} s^k (n^(2k+1) - n) x^(2k+1) / (2k+1)!`,
/// with `s = -1` for the sine and `s = +1` for the hyperbolic sine.
fn odd_excess_series(n: f64, x: f64, sign: f64) -> f64 {
    let mut sum = 0.0;
    let mut nx_pow = n * x; // (n x)^(2k+1)
    let mut x_pow = x; // x^(2k+1)
    let mut fact = 1.0; // (2k+1)!
    let mut s = 1.0;
    let nx2 = (n * x) * (n * x);
    for k in 1..40 {
        nx_pow *= nx2;
        x_pow *= x * x;
        fact *= (2 * k) as f64 * (2 * k + 1) as f64;
        s *= sign;
        let term = s * (nx_pow - n * x_pow) / fact;
        sum += term;
        if term.abs() <= 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// `n sin(x) - sin(n x)`.
fn sin_deficit(n: f64, x: f64) -> f64 {
    if (n * x).abs() < 0.5 {
        // n sin x - sin(n x) = -sum (-1)^k (n^(2k+1) - n) x^(2k+1)/(2k+1)!
        -odd_excess_series(n, x, -1.0)
    } else {
        n * x.sin() - (n * x).sin()
    }
}

/// `sinh(n x) - n sinh(x)`.
fn sinh_excess(n: f64, x: f64) -> f64 {
    if (n * x).abs() < 0.5 {
        odd_excess_series(n, x, 1.0)
    } else {
        (n * x).sinh() - n * x.sinh()
    }
}

/// `g_n(u) = n^2 sin^2 u - sin^2(n u) >= 0`.
pub fn g(n: Dimension, u: f64) -> f64 {
    let nf = n.as_f64();
    let a = fold_u(u);
    // The fold maps sin(n u) to ±sin(n a); g only sees its square.
    let d = sin_deficit(nf, a);
    let s = nf * a.sin() + (nf * a).sin();
    (d * s).max(0.0)
}

/// `sinh^2(n v) - n^2 sinh^2 v`.
fn lhs(nf: f64, v: f64) -> f64 {
    sinh_excess(nf, v) * ((nf * v).sinh() + nf * v.sinh())
}

/// Derivative of [`lhs`] in `v`: `n (sinh(2 n v) - n sinh(2 v))`.
fn lhs_prime(nf: f64, v: f64) -> f64 {
    nf * sinh_excess(nf, 2.0 * v)
}

/// Root `v(n, u)` of the borderline equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BorderlineSolve {
    pub n: Dimension,
    pub u: f64,
    pub v: f64,
    pub residual: f64,
}

/// Solves `sinh^2(n v) - n^2 sinh^2 v = g_n(u)` for `v >= 0`: geometric
/// bracket expansion, bisection, then a Newton polish. `tol` bounds the
/// residual relative to `max(1, g_n(u))`.
pub fn solve_v(n: Dimension, u: f64, tol: f64) -> Result<BorderlineSolve> {
    if !(tol > 0.0) || !u.is_finite() {
        return Err(Error::InvalidArgument(format!("solve_v needs tol > 0 and finite u, got {tol}, {u}")));
    }
    let nf = n.as_f64();
    let target = g(n, u);
    if target == 0.0 {
        return Ok(BorderlineSolve { n, u, v: 0.0, residual: 0.0 });
    }
    let mut hi = (target + nf * nf * 1f64.sinh().powi(2)).sqrt().asinh() / nf + 1.0;
    let mut grow = 0;
    while lhs(nf, hi) < target {
        hi *= 2.0;
        grow += 1;
        if grow > 64 {
            return Err(Error::NonConvergence("borderline bracket"));
        }
    }
    let mut lo = 0.0;
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if lhs(nf, mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut v = 0.5 * (lo + hi);
    for _ in 0..NEWTON_STEPS {
        let f = lhs(nf, v) - target;
        let d = lhs_prime(nf, v);
        if f == 0.0 || d <= 0.0 {
            break;
        }
        let next = v - f / d;
        if !(next > 0.0) || !next.is_finite() {
            break;
        }
        v = next;
    }
    let residual = (lhs(nf, v) - target).abs();
    if residual > tol * target.max(1.0) {
        return Err(Error::NonConvergence("borderline equation"));
    }
    Ok(BorderlineSolve { n, u, v, residual })
}

/// The two values of `u` where the curve meets the real axis.
fn on_axis(u: f64) -> Option<bool> {
    let w = wrap_u(u);
    if w == 0.0 {
        Some(false)
    } else if w == PI {
        Some(true)
    } else {
        None
    }
}

/// `f_n^(t)(pi)`.
pub fn far_crossing(n: Dimension, t: EigType) -> f64 {
    match (t, n.is_even()) {
        (EigType::Type1, true) | (EigType::Type2, false) => -1.0,
        (EigType::Type1, false) | (EigType::Type2, true) => -xi(n),
    }
}

/// `f_n^(t)(0)`.
pub fn near_crossing(n: Dimension, t: EigType) -> f64 {
    match t {
        EigType::Type1 => xi(n),
        EigType::Type2 => 1.0,
    }
}

fn mode(n: Dimension, u: f64, v: f64) -> ModeParameter {
    ModeParameter::new(n, Complex64::new(u, v))
}

/// `f_n^(t)(u)`, the point of `B_n^(t)` with parameter `u`.
pub fn f_curve(n: Dimension, u: f64, t: EigType) -> Result<Complex64> {
    let s = solve_v(n, u, SOLVE_TOL)?;
    f_at(n, u, s.v, t)
}

fn f_at(n: Dimension, u: f64, v: f64, t: EigType) -> Result<Complex64> {
    match on_axis(u) {
        Some(false) => Ok(Complex64::new(near_crossing(n, t), 0.0)),
        Some(true) => Ok(Complex64::new(far_crossing(n, t), 0.0)),
        None => rho_of_mu(mode(n, u, v), t),
    }
}

/// `b_n^(t)(u)`, the borderline eigenvalue at `f_n^(t)(u)`; `|b| = n`.
pub fn b_curve(n: Dimension, u: f64, t: EigType) -> Result<Complex64> {
    let s = solve_v(n, u, SOLVE_TOL)?;
    Ok(lambda_of_mu(mode(n, u, s.v), t))
}

/// `dv/du = (n sin 2u - sin 2nu) / (sinh 2nv - n sinh 2v)`.
fn dv_du(nf: f64, u: f64, v: f64) -> f64 {
    sin_deficit(nf, 2.0 * u) / sinh_excess(nf, 2.0 * v)
}

/// `d rho / d mu` for the type-`t` ratio.
fn drho_dmu(n: Dimension, mu: Complex64, t: EigType) -> Complex64 {
    let k = n.get() as i64;
    let (a, b) = ((k + 1) as f64 / 2.0, (k - 1) as f64 / 2.0);
    // Sines and cosines of the same argument share one scale exponent.
    match t {
        EigType::Type1 => {
            let (sp, sm) = (sin_half(k + 1, mu), sin_half(k - 1, mu));
            let (cp, cm) = (cos_half(k + 1, mu), cos_half(k - 1, mu));
            let num = a * cp.mantissa * sm.mantissa - b * sp.mantissa * cm.mantissa;
            num / (sm.mantissa * sm.mantissa) * (sp.exponent - sm.exponent).exp()
        }
        EigType::Type2 => {
            let (sp, sm) = (sin_half(k + 1, mu), sin_half(k - 1, mu));
            let (cp, cm) = (cos_half(k + 1, mu), cos_half(k - 1, mu));
            let num = b * cp.mantissa * sm.mantissa - a * sp.mantissa * cm.mantissa;
            num / (cm.mantissa * cm.mantissa) * (cp.exponent - cm.exponent).exp()
        }
    }
}

fn derivative_at(n: Dimension, u: f64, v: f64, t: EigType) -> Complex64 {
    let dv = dv_du(n.as_f64(), u, v);
    drho_dmu(n, Complex64::new(u, v), t) * Complex64::new(1.0, dv)
}

/// `d f_n^(t) / du` on `(-pi, 0) ∪ (0, pi)`.
pub fn curve_derivative(n: Dimension, u: f64, t: EigType) -> Result<Complex64> {
    if on_axis(u).is_some() || !u.is_finite() {
        return Err(Error::Domain(u));
    }
    let s = solve_v(n, u, SOLVE_TOL)?;
    Ok(derivative_at(n, u, s.v, t))
}

/// One point of a traced curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    #[serde(rename = "type")]
    pub eig_type: EigType,
    pub u: f64,
    pub v: f64,
    pub rho: ComplexPoint,
    pub lambda: ComplexPoint,
    /// `d rho / du`; zero at `u = 0, pi`, where `v` has a corner and the
    /// one-sided derivatives of `rho` both vanish.
    pub drho_du: ComplexPoint,
}

pub fn curve_sample(n: Dimension, u: f64, t: EigType) -> Result<CurveSample> {
    let s = solve_v(n, u, SOLVE_TOL)?;
    let rho = f_at(n, u, s.v, t)?;
    let lambda = lambda_of_mu(mode(n, u, s.v), t);
    let drho = if on_axis(u).is_some() { Complex64::new(0.0, 0.0) } else { derivative_at(n, u, s.v, t) };
    // Adding +0 turns a signed zero into +0 and leaves everything else alone.
    let unsigned = |z: Complex64| ComplexPoint(Complex64::new(z.re + 0.0, z.im + 0.0));
    Ok(CurveSample {
        eig_type: t,
        u,
        v: s.v + 0.0,
        rho: unsigned(rho),
        lambda: unsigned(lambda),
        drho_du: unsigned(drho),
    })
}

/// A closed borderline curve sampled over `u ∈ (-pi, pi]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TracedCurve {
    #[serde(rename = "type")]
    pub eig_type: EigType,
    pub n: Dimension,
    pub samples: Vec<CurveSample>,
    /// The samples close up: `f(pi) = f(-pi)`.
    pub closed: bool,
}

impl TracedCurve {
    pub fn points(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.samples.iter().map(|s| s.rho.0)
    }

    /// `(min re, max re, min im, max im)`.
    pub fn bounding_box(&self) -> (f64, f64, f64, f64) {
        self.points().fold(
            (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY),
            |(a, b, c, d), z| (a.min(z.re), b.max(z.re), c.min(z.im), d.max(z.im)),
        )
    }

    pub fn diagonal(&self) -> f64 {
        let (a, b, c, d) = self.bounding_box();
        (b - a).hypot(d - c)
    }

    /// Closed polyline segments `(samples[i], samples[i+1 mod len])`.
    pub fn segments(&self) -> impl Iterator<Item = (Complex64, Complex64)> + '_ {
        let m = self.samples.len();
        (0..m).map(move |i| (self.samples[i].rho.0, self.samples[(i + 1) % m].rho.0))
    }

    /// Euclidean distance from `z` to the closed polyline.
    pub fn distance(&self, z: Complex64) -> f64 {
        self.segments().map(|(a, b)| segment_distance(z, a, b)).fold(f64::INFINITY, f64::min)
    }
}

pub fn segment_distance(z: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (z - a).norm();
    }
    let t = ((z - a) * ab.conj()).re / len2;
    (z - (a + ab * t.clamp(0.0, 1.0))).norm()
}

/// Default uniform grid size of [`trace_default`].
pub const DEFAULT_BASE_SAMPLES: usize = 2048;
/// Default chord tolerance of [`trace_default`], relative to the bounding-box diagonal.
pub const DEFAULT_REFINE_FRACTION: f64 = 1e-3;

/// Samples `B_n^(t)` on a uniform grid in `u` and bisects every segment
/// whose chord exceeds `refine_tol` or whose speed `|df/du|` falls below ten
/// times the segment length (the neighbourhood of a cusp), up to 20 levels.
/// The grid always contains `u = 0` and `u = pi`.
pub fn trace_curve(n: Dimension, t: EigType, base_samples: usize, refine_tol: f64) -> Result<TracedCurve> {
    if base_samples < 16 {
        return Err(Error::InvalidArgument(format!("base_samples must be at least 16, got {base_samples}")));
    }
    if !(refine_tol > 0.0) {
        return Err(Error::InvalidArgument(format!("refine_tol must be positive, got {refine_tol}")));
    }
    let m = base_samples + base_samples % 2;
    let grid: Vec<f64> = (1..=m)
        .map(|k| if 2 * k == m { 0.0 } else if k == m { PI } else { -PI + 2.0 * PI * k as f64 / m as f64 })
        .collect();
    let base = evaluate_all(n, t, &grid)?;
    let mut samples = Vec::with_capacity(2 * m);
    samples.push(base[0]);
    for w in base.windows(2) {
        refine(n, t, w[0], w[1], refine_tol, 0, &mut samples)?;
        samples.push(w[1]);
    }
    let closed = (samples[samples.len() - 1].rho.0 - f_curve(n, -PI, t)?).norm() <= 1e-12;
    Ok(TracedCurve { eig_type: t, n, samples, closed })
}

/// [`trace_curve`] with the default grid and a chord tolerance of 1e-3 of
/// the curve's bounding-box diagonal.
pub fn trace_default(n: Dimension, t: EigType) -> Result<TracedCurve> {
    trace_with_base(n, t, DEFAULT_BASE_SAMPLES)
}

/// [`trace_curve`] with `base_samples` grid points and the default chord
/// tolerance of [`trace_default`].
pub fn trace_with_base(n: Dimension, t: EigType, base_samples: usize) -> Result<TracedCurve> {
    let coarse = trace_curve(n, t, 256, f64::INFINITY)?;
    trace_curve(n, t, base_samples, DEFAULT_REFINE_FRACTION * coarse.diagonal())
}

/// Evaluates the grid on a few worker threads; results keep grid order.
fn evaluate_all(n: Dimension, t: EigType, grid: &[f64]) -> Result<Vec<CurveSample>> {
    let workers = std::thread::available_parallelism().map(|w| w.get()).unwrap_or(1).min(8);
    if workers <= 1 || grid.len() < 512 {
        return grid.iter().map(|&u| curve_sample(n, u, t)).collect();
    }
    let chunk = grid.len().div_ceil(workers);
    let parts: Vec<Result<Vec<CurveSample>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = grid
            .chunks(chunk)
            .map(|part| scope.spawn(move || part.iter().map(|&u| curve_sample(n, u, t)).collect()))
            .collect();
        handles.into_iter().map(|h| h.join().expect("curve worker panicked")).collect()
    });
    let mut out = Vec::with_capacity(grid.len());
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

fn needs_split(a: &CurveSample, b: &CurveSample, refine_tol: f64) -> bool {
    let h = b.u - a.u;
    if (b.rho.0 - a.rho.0).norm() > refine_tol {
        return true;
    }
    // Slow parametrisation near a cusp. At u = 0, pi the speed also vanishes,
    // but only because v has a corner there; those ends are exempt.
    let interior = |s: &CurveSample| on_axis(s.u).is_none();
    interior(a) && interior(b) && a.drho_du.0.norm().min(b.drho_du.0.norm()) < 10.0 * h
}

fn refine(
    n: Dimension,
    t: EigType,
    a: CurveSample,
    b: CurveSample,
    refine_tol: f64,
    depth: usize,
    out: &mut Vec<CurveSample>,
) -> Result<()> {
    if depth >= MAX_REFINE_DEPTH || !needs_split(&a, &b, refine_tol) {
        return Ok(());
    }
    let mid = curve_sample(n, 0.5 * (a.u + b.u), t)?;
    refine(n, t, a, mid, refine_tol, depth + 1, out)?;
    out.push(mid);
    refine(n, t, mid, b, refine_tol, depth + 1, out)
}

/// Closest approach of two parameter-separated parts of a curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InjectivityReport {
    pub min_distance: f64,
    pub u_a: f64,
    pub u_b: f64,
}

fn circular_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).abs().rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

/// Minimum of `|rho(u) - rho(u')|` over sample pairs whose parameters are at
/// least `min_param_gap` apart on the circle. Evidence only: a positive
/// value is consistent with, but does not prove, the curve being simple.
pub fn injectivity_report(curve: &TracedCurve, min_param_gap: f64) -> Result<InjectivityReport> {
    let s = &curve.samples;
    if s.len() < 64 {
        return Err(Error::InsufficientSamples { needed: 64, have: s.len() });
    }
    let mut best = InjectivityReport { min_distance: f64::INFINITY, u_a: f64::NAN, u_b: f64::NAN };
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            if circular_gap(s[i].u, s[j].u) < min_param_gap {
                continue;
            }
            let d = (s[i].rho.0 - s[j].rho.0).norm();
            if d < best.min_distance {
                best = InjectivityReport { min_distance: d, u_a: s[i].u, u_b: s[j].u };
            }
        }
    }
    if best.min_distance.is_infinite() {
        return Err(Error::EmptyPairs);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relations::default_borderline_tol;
    use proptest::prelude::*;

    fn dim(n: usize) -> Dimension {
        Dimension::new(n).unwrap()
    }

    #[test]
    fn g_examples() {
        assert_eq!(g(dim(5), 0.0), 0.0);
        assert_eq!(g(dim(5), PI), 0.0);
        assert!((g(dim(3), FRAC_PI_2) - 8.0).abs() < 1e-14);
    }

    #[test]
    fn g_matches_direct_formula() {
        for n in 2..12 {
            for k in 1..50 {
                let u = -PI + 2.0 * PI * k as f64 / 50.0 + 0.01;
                let nf = n as f64;
                let direct = nf * nf * u.sin().powi(2) - (nf * u).sin().powi(2);
                assert!((g(dim(n), u) - direct).abs() < 1e-13 * (1.0 + direct), "n={n} u={u}");
            }
        }
    }

    #[test]
    fn solve_v_on_axis_is_zero() {
        assert_eq!(solve_v(dim(7), 0.0, 1e-12).unwrap().v, 0.0);
        assert_eq!(solve_v(dim(7), PI, 1e-12).unwrap().v, 0.0);
        assert_eq!(solve_v(dim(7), -PI, 1e-12).unwrap().v, 0.0);
    }

    #[test]
    fn solve_v_matches_small_u_series() {
        let (n, u) = (7.0_f64, 0.1_f64);
        let s = solve_v(dim(7), u, 1e-12).unwrap();
        let series = u * (1.0 - (n * n + 1.0) / 15.0 * u * u + (n * n + 1.0).powi(2) / 150.0 * u.powi(4));
        assert!((s.v - 0.0968333).abs() < 1e-3);
        // The truncation error is O(u^7) with a coefficient of a few (n^2+1)^3 / 10^4.
        assert!((s.v - series).abs() < 2.0 * u.powi(7) * (n * n + 1.0).powi(3) / 1e3);
    }

    #[test]
    fn solve_v_is_accurate_near_axis() {
        // Compare with the series where it is far more accurate than 1e-12.
        let n = 5.0_f64;
        for u in [1e-3, 1e-5, 1e-7] {
            let s = solve_v(dim(5), u, 1e-12).unwrap();
            let m = n * n + 1.0;
            let series = u * (1.0 - m / 15.0 * u * u + m * m / 150.0 * u.powi(4));
            assert!((s.v - series).abs() < 1e-13 * u, "u={u}: {} vs {series}", s.v);
        }
    }

    #[test]
    fn axis_values() {
        let n6 = dim(6);
        assert_eq!(f_curve(n6, 0.0, EigType::Type1).unwrap(), Complex64::new(7.0 / 5.0, 0.0));
        assert_eq!(f_curve(n6, PI, EigType::Type1).unwrap(), Complex64::new(-1.0, 0.0));
        assert_eq!(f_curve(n6, PI, EigType::Type2).unwrap(), Complex64::new(-7.0 / 5.0, 0.0));
        assert_eq!(f_curve(dim(5), PI, EigType::Type2).unwrap(), Complex64::new(-1.0, 0.0));
        assert_eq!(b_curve(n6, 0.0, EigType::Type1).unwrap(), Complex64::new(-6.0, 0.0));
        assert_eq!(b_curve(n6, 0.0, EigType::Type2).unwrap(), Complex64::new(6.0, 0.0));
        assert_eq!(b_curve(dim(5), PI, EigType::Type1).unwrap(), Complex64::new(-5.0, 0.0));
    }

    #[test]
    fn f_curve_near_axis_is_continuous() {
        for n in [2, 3, 6, 7] {
            for t in EigType::BOTH {
                let near = f_curve(dim(n), 1e-6, t).unwrap();
                let far = f_curve(dim(n), PI - 1e-6, t).unwrap();
                assert!((near.re - near_crossing(dim(n), t)).abs() < 1e-9);
                assert!((far.re - far_crossing(dim(n), t)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn f_curve_matches_explicit_real_imaginary_forms() {
        // Type 1: Re = (cos u cosh nv - cos nu cosh v) / (cosh (n-1)v - cos (n-1)u),
        //         Im = -(sin u sinh nv - sin nu sinh v) / (same);
        // type 2 flips the sign of the second terms.
        for n in [3usize, 6, 9] {
            let nf = n as f64;
            for &u in &[0.3, 1.1, 2.0, -2.7] {
                let v = solve_v(dim(n), u, 1e-12).unwrap().v;
                for t in EigType::BOTH {
                    let s = if t == EigType::Type1 { 1.0 } else { -1.0 };
                    let den = ((nf - 1.0) * v).cosh() - s * ((nf - 1.0) * u).cos();
                    let re = (u.cos() * (nf * v).cosh() - s * (nf * u).cos() * v.cosh()) / den;
                    let im = -(u.sin() * (nf * v).sinh() - s * (nf * u).sin() * v.sinh()) / den;
                    let f = f_curve(dim(n), u, t).unwrap();
                    assert!((f - Complex64::new(re, im)).norm() < 1e-11 * (1.0 + f.norm()), "n={n} u={u} {t}");
                }
            }
        }
    }

    #[test]
    fn b_curve_has_modulus_n() {
        for n in 2..13 {
            for k in 0..40 {
                let u = -PI + 2.0 * PI * (k as f64 + 0.5) / 40.0;
                for t in EigType::BOTH {
                    let b = b_curve(dim(n), u, t).unwrap();
                    assert!((b.norm() - n as f64).abs() < default_borderline_tol(dim(n)), "n={n} u={u}");
                }
            }
        }
    }

    #[test]
    fn lower_half_plane_for_positive_u() {
        for n in 2..10 {
            for t in EigType::BOTH {
                for k in 1..20 {
                    let u = PI * k as f64 / 20.0;
                    assert!(f_curve(dim(n), u, t).unwrap().im < 0.0);
                    assert!(f_curve(dim(n), -u, t).unwrap().im > 0.0);
                }
            }
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let n = dim(6);
        let h = 1e-5;
        let fd = (f_curve(n, 0.5 + h, EigType::Type1).unwrap() - f_curve(n, 0.5 - h, EigType::Type1).unwrap())
            / (2.0 * h);
        let d = curve_derivative(n, 0.5, EigType::Type1).unwrap();
        assert!((d - fd).norm() < 1e-6 * d.norm());
        for t in EigType::BOTH {
            for &u in &[0.05, 0.7, 1.9, 3.0, -0.4] {
                let fd = (f_curve(dim(9), u + h, t).unwrap() - f_curve(dim(9), u - h, t).unwrap()) / (2.0 * h);
                let d = curve_derivative(dim(9), u, t).unwrap();
                assert!((d - fd).norm() < 1e-5 * (1.0 + d.norm()), "u={u} {t}: {d} vs {fd}");
            }
        }
    }

    #[test]
    fn derivative_domain() {
        assert_eq!(curve_derivative(dim(5), 0.0, EigType::Type1), Err(Error::Domain(0.0)));
        assert_eq!(curve_derivative(dim(5), PI, EigType::Type1), Err(Error::Domain(PI)));
        // Moving right from u = 0 the curve heads into the lower half-plane.
        assert!(curve_derivative(dim(5), 1e-3, EigType::Type1).unwrap().im < 0.0);
    }

    #[test]
    fn trace_contains_axis_points() {
        let c = trace_curve(dim(5), EigType::Type1, 64, 0.05).unwrap();
        assert!(c.closed);
        assert!(c.samples.iter().any(|s| s.u == 0.0 && s.rho.0 == Complex64::new(1.5, 0.0)));
        assert!(c.samples.iter().any(|s| s.u == PI && s.rho.0 == Complex64::new(-1.5, 0.0)));
        assert!(c.samples.windows(2).all(|w| w[0].u < w[1].u));
        assert!(trace_curve(dim(5), EigType::Type1, 8, 0.05).is_err());
    }

    #[test]
    fn injectivity_examples() {
        let c = trace_curve(dim(5), EigType::Type1, 256, 0.02).unwrap();
        assert!(injectivity_report(&c, 0.5).unwrap().min_distance > 0.0);
        assert_eq!(injectivity_report(&c, 2.0 * PI), Err(Error::EmptyPairs));
    }

    proptest! {
        #[test]
        fn v_symmetries(u in -PI..PI, n in 2usize..13) {
            let v = solve_v(dim(n), u, 1e-12).unwrap().v;
            prop_assert!((solve_v(dim(n), -u, 1e-12).unwrap().v - v).abs() <= 1e-12);
            prop_assert!((solve_v(dim(n), PI - u, 1e-12).unwrap().v - v).abs() <= 1e-12);
        }

        #[test]
        fn conjugate_symmetry(u in -PI..PI, n in 2usize..13) {
            for t in EigType::BOTH {
                let a = f_curve(dim(n), u, t).unwrap();
                let b = f_curve(dim(n), -u, t).unwrap();
                prop_assert!((a - b.conj()).norm() <= 1e-12 * (1.0 + a.norm()));
            }
        }

        #[test]
        fn even_n_mirror(u in -PI..PI, m in 1usize..7) {
            let n = dim(2 * m);
            let a = f_curve(n, PI - u, EigType::Type1).unwrap();
            let b = f_curve(n, u, EigType::Type2).unwrap();
            prop_assert!((a + b.conj()).norm() <= 1e-11 * (1.0 + a.norm()));
        }

        #[test]
        fn residual_invariant(u in -PI..PI, n in 2usize..13) {
            let s = solve_v(dim(n), u, 1e-12).unwrap();
            prop_assert!(s.v >= 0.0);
            prop_assert!(s.residual <= 1e-12 * g(dim(n), u).max(1.0));
        }
    }
}
