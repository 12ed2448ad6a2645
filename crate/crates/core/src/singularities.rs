//! Cusp-like singularities of the borderline curves and the local models
//! near them.
//!
//! A point `rho_0 = f_n^(k)(u_0)` with `u_0 ∉ {0, ±pi}` is a cusp exactly
//! when the borderline eigenvalue there is the double eigenvalue `-n`. Cusps
//! are found as the places where the principal phase of `b_n^(k)(u)` jumps by
//! `2 pi`, i.e. where `b` passes through `-n`. Near a cusp the coalescing
//! eigenvalues follow `lambda ≈ -n + eta_0 (rho - rho_0)^(1/2)` and the curve
//! is locally a cardioid `r = A [1 + cos(theta + 2 psi)]` about `rho_0`,
//! `psi = arg eta_0`. Near the real axis it is a parabola.
//!
//! `eta_0` is read off the curve itself: along the curve `lambda + n ≈ b'(u_0)
//! (u - u_0)` and `rho - rho_0 ≈ f''(u_0) (u - u_0)^2 / 2`. The cardioid
//! amplitude is fitted separately; it equals `2 n^2 / |eta_0|^2` only when the
//! second Puiseux coefficient is negligible, which it is not in general.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::borderline::{b_curve, curve_derivative, f_curve, TracedCurve};
use crate::complex::ComplexPoint;
use crate::error::{Error, Result};
use crate::matrix::{xi, Dimension, EigType};
use crate::oracle::char_value;
use crate::relations::{double_condition_residual, exceptional_rho, ModeParameter};

/// Minimum number of phase samples over `(0, pi)`.
pub const PHASE_GRID: usize = 4096;
/// Default radius of the cardioid fitting window around a cusp.
pub const CARDIOID_WINDOW: f64 = 0.03;
/// Relative residual below which `p(-n)` and `p'(-n)` count as zero.
pub const DOUBLE_TOL: f64 = 1e-6;
const CARDIOID_POINTS_PER_ARC: usize = 24;

/// Residual checks recorded for a cusp.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CuspResiduals {
    /// `|d f / du|` at `u_0`.
    pub curve_derivative: f64,
    /// Relative residual of the repeated-eigenvalue condition.
    pub double_condition: f64,
    /// Characteristic-polynomial check at `-n`; absent when `rho_0` is one
    /// of the excluded values.
    pub oracle_double: Option<DoubleVerdict>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CuspReport {
    #[serde(rename = "type")]
    pub eig_type: EigType,
    pub n: Dimension,
    pub u0: f64,
    pub rho0: ComplexPoint,
    pub lambda0: ComplexPoint,
    /// `|eta_0|` of the Puiseux expansion.
    pub eta_abs: f64,
    /// `arg eta_0`, reduced to `(-pi/2, pi/2]` (the square root fixes it only modulo `pi`).
    pub psi: f64,
    /// Direction `pi - 2 psi` of the local bisector, in `(-pi, pi]`.
    pub bisector_angle: f64,
    /// Least-squares cardioid through the curve near the cusp.
    pub cardioid: CardioidFit,
    pub residuals: CuspResiduals,
}

/// `arg(-b(u))`, continuous through a cusp.
fn phase_from_minus_n(n: Dimension, u: f64, t: EigType) -> Result<f64> {
    Ok((-b_curve(n, u, t)?).arg())
}

/// Parameters `u_0 ∈ (0, pi)` of the cusps of `B_n^(t)` in the lower half-plane.
pub fn cusp_parameters(n: Dimension, t: EigType) -> Result<Vec<f64>> {
    let m = PHASE_GRID.max(64 * n.get());
    let us: Vec<f64> = (1..=m).map(|j| PI * j as f64 / (m + 1) as f64).collect();
    let phases = us.iter().map(|&u| b_curve(n, u, t).map(|b| b.arg())).collect::<Result<Vec<f64>>>()?;
    let mut out = Vec::new();
    for j in 0..m - 1 {
        if (phases[j + 1] - phases[j]).abs() <= PI {
            continue;
        }
        // b crossed the negative real axis: bisect arg(-b) -> 0.
        let (mut lo, mut hi) = (us[j], us[j + 1]);
        let mut f_lo = phase_from_minus_n(n, lo, t)?;
        if f_lo * phase_from_minus_n(n, hi, t)? > 0.0 {
            continue;
        }
        while hi - lo > 1e-12 {
            let mid = 0.5 * (lo + hi);
            let f_mid = phase_from_minus_n(n, mid, t)?;
            if f_mid == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if (f_mid < 0.0) == (f_lo < 0.0) {
                lo = mid;
                f_lo = f_mid;
            } else {
                hi = mid;
            }
        }
        let u0 = 0.5 * (lo + hi);
        if (b_curve(n, u0, t)? + n.as_f64()).norm() <= 1e-6 * n.as_f64() {
            out.push(u0);
        }
    }
    Ok(out)
}

/// All cusps of `B_n^(t)`, in increasing `u_0`; each lower-half-plane cusp
/// at `u_0` is paired with its mirror image at `-u_0`.
pub fn find_cusps(n: Dimension, t: EigType) -> Result<Vec<CuspReport>> {
    let mut reports = Vec::new();
    for u0 in cusp_parameters(n, t)? {
        reports.push(cusp_report(n, t, u0)?);
        reports.push(cusp_report(n, t, -u0)?);
    }
    reports.sort_by(|a, b| a.u0.total_cmp(&b.u0));
    Ok(reports)
}

fn cusp_report(n: Dimension, t: EigType, u0: f64) -> Result<CuspReport> {
    let rho0 = f_curve(n, u0, t)?;
    let lambda0 = b_curve(n, u0, t)?;
    let v0 = crate::borderline::solve_v(n, u0, crate::borderline::SOLVE_TOL)?.v;
    let cond = double_condition_residual(ModeParameter::new(n, Complex64::new(u0, v0)), rho0, t)?;
    let oracle_double = match verify_double(n, rho0) {
        Ok(v) => Some(v),
        Err(Error::ExcludedRho(_)) => None,
        Err(e) => return Err(e),
    };
    let samples = cardioid_samples(n, t, u0, rho0, CARDIOID_WINDOW)?;
    let cardioid = fit_cardioid_points(n, rho0, &samples)?;
    let eta = puiseux_coefficient(n, t, u0)?;
    let psi = reduce_half_turn(eta.arg());
    Ok(CuspReport {
        eig_type: t,
        n,
        u0,
        rho0: ComplexPoint(rho0),
        lambda0: ComplexPoint(lambda0),
        eta_abs: eta.norm(),
        psi,
        bisector_angle: wrap_angle(PI - 2.0 * psi),
        cardioid,
        residuals: CuspResiduals {
            curve_derivative: curve_derivative(n, u0, t)?.norm(),
            double_condition: cond.relative,
            oracle_double,
        },
    })
}

/// Points of the curve on both arcs leaving the cusp, at the radii
/// `window (k / K)^2`, so the two arcs are sampled at equal distances.
fn cardioid_samples(n: Dimension, t: EigType, u0: f64, rho0: Complex64, window: f64) -> Result<Vec<Complex64>> {
    let dist = |u: f64| f_curve(n, u, t).map(|z| (z - rho0).norm());
    let mut out = Vec::with_capacity(2 * CARDIOID_POINTS_PER_ARC);
    for side in [-1.0, 1.0] {
        // Bracket the parameter offset that reaches the outer radius.
        let mut reach = 1e-4;
        while dist(u0 + side * reach)? < window {
            reach *= 1.5;
            if reach > 0.5 {
                break;
            }
        }
        for k in 1..=CARDIOID_POINTS_PER_ARC {
            let r = window * (k as f64 / CARDIOID_POINTS_PER_ARC as f64).powi(2);
            let (mut lo, mut hi) = (0.0, reach);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if dist(u0 + side * mid)? < r {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            out.push(f_curve(n, u0 + side * 0.5 * (lo + hi), t)?);
        }
    }
    Ok(out)
}

/// `eta_0 = b'(u_0) / sqrt(f''(u_0) / 2)`, up to sign, by central differences.
pub fn puiseux_coefficient(n: Dimension, t: EigType, u0: f64) -> Result<Complex64> {
    let h = 1e-5;
    let db = (b_curve(n, u0 + h, t)? - b_curve(n, u0 - h, t)?) / (2.0 * h);
    let ddf = (curve_derivative(n, u0 + h, t)? - curve_derivative(n, u0 - h, t)?) / (2.0 * h);
    Ok(db / (0.5 * ddf).sqrt())
}

fn reduce_half_turn(a: f64) -> f64 {
    let w = a.rem_euclid(PI);
    if w > PI / 2.0 {
        w - PI
    } else {
        w
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CardioidFit {
    /// Fitted `A` in `r = A [1 + cos(theta + 2 psi)]`.
    pub amplitude: f64,
    /// `n sqrt(2 / A)`, the `|eta_0|` the leading-order cardioid would imply.
    pub eta_abs: f64,
    pub psi: f64,
    pub bisector_angle: f64,
    /// RMS misfit of `r(theta)` divided by the largest sampled radius.
    pub fit_residual: f64,
    pub samples: usize,
}

/// Fits `r = A [1 + cos(theta + 2 psi)]` to the trace samples within
/// `window` of the cusp by linear least squares on `[1, cos theta, sin theta]`.
pub fn fit_cardioid(n: Dimension, cusp: &CuspReport, trace: &TracedCurve, window: f64) -> Result<CardioidFit> {
    let rho0 = cusp.rho0.0;
    let pts: Vec<Complex64> = trace
        .points()
        .filter(|z| {
            let d = (z - rho0).norm();
            d > 0.0 && d < window
        })
        .collect();
    if pts.len() < 12 {
        return Err(Error::InsufficientSamples { needed: 12, have: pts.len() });
    }
    fit_cardioid_points(n, rho0, &pts)
}

fn fit_cardioid_points(n: Dimension, rho0: Complex64, pts: &[Complex64]) -> Result<CardioidFit> {
    if pts.len() < 3 {
        return Err(Error::InsufficientSamples { needed: 3, have: pts.len() });
    }
    // Normal equations for r ~ a + b cos(theta) + c sin(theta).
    let mut ata = [[0.0; 3]; 3];
    let mut atr = [0.0; 3];
    let mut rmax: f64 = 0.0;
    for z in pts {
        let d = z - rho0;
        let (r, th) = (d.norm(), d.arg());
        rmax = rmax.max(r);
        let row = [1.0, th.cos(), th.sin()];
        for i in 0..3 {
            atr[i] += row[i] * r;
            for j in 0..3 {
                ata[i][j] += row[i] * row[j];
            }
        }
    }
    let [a, b, c] = solve3(ata, atr).ok_or(Error::InsufficientSamples { needed: 3, have: pts.len() })?;
    let amp = 0.5 * (a + b.hypot(c));
    let psi = 0.5 * (-c).atan2(b);
    let rms = (pts
        .iter()
        .map(|z| {
            let d = z - rho0;
            let model = a + b * d.arg().cos() + c * d.arg().sin();
            (d.norm() - model).powi(2)
        })
        .sum::<f64>()
        / pts.len() as f64)
        .sqrt();
    Ok(CardioidFit {
        amplitude: amp,
        eta_abs: n.as_f64() * (2.0 / amp).sqrt(),
        psi,
        bisector_angle: wrap_angle(PI - 2.0 * psi),
        fit_residual: rms / rmax,
        samples: pts.len(),
    })
}

fn wrap_angle(a: f64) -> f64 {
    let mut w = a.rem_euclid(2.0 * PI);
    if w > PI {
        w -= 2.0 * PI;
    }
    w
}

/// Cramer's rule for a 3x3 system.
fn solve3(m: [[f64; 3]; 3], r: [f64; 3]) -> Option<[f64; 3]> {
    let det = |m: &[[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(&m);
    if d == 0.0 || !d.is_finite() {
        return None;
    }
    let mut out = [0.0; 3];
    for (k, slot) in out.iter_mut().enumerate() {
        let mut mk = m;
        for i in 0..3 {
            mk[i][k] = r[i];
        }
        *slot = det(&mk) / d;
    }
    Some(out)
}

/// Characteristic-polynomial test of `-n` being a double eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DoubleVerdict {
    /// `|p(-n)|` relative to the size of the terms that form it.
    pub p_at: f64,
    /// `|p'(-n)|`, likewise relative.
    pub dp_at: f64,
    pub verdict: bool,
}

pub fn verify_double(n: Dimension, rho0: Complex64) -> Result<DoubleVerdict> {
    if exceptional_rho(n, rho0).is_some() {
        return Err(Error::ExcludedRho(rho0));
    }
    let v = char_value(n, rho0, Complex64::new(-n.as_f64(), 0.0))?;
    let p_at = v.p.norm() / v.p_scale;
    let dp_at = v.dp.norm() / v.dp_scale;
    Ok(DoubleVerdict { p_at, dp_at, verdict: p_at < DOUBLE_TOL && dp_at < DOUBLE_TOL })
}

/// Small-`u` expansion of `f_n^(t)(u)` through `u^4`; the error is `O(u^6)`.
pub fn small_u_series(n: Dimension, u: f64, t: EigType) -> Complex64 {
    let nf = n.as_f64();
    let (u2, u4) = (u * u, u.powi(4));
    let m = nf * nf + 1.0;
    let lower = match t {
        EigType::Type1 => {
            let x = xi(n);
            x * (1.0 - Complex64::i() * nf / 3.0 * u2
                - nf * Complex64::new((nf * nf + 5.0 * nf + 1.0) / 90.0, -m / 45.0) * u4)
        }
        EigType::Type2 => {
            1.0 - Complex64::i() * nf * u2 + nf * Complex64::new((nf * nf - 5.0 * nf + 1.0) / 10.0, m / 15.0) * u4
        }
    };
    // The expansion is for u > 0; the curve is symmetric about the real axis.
    if u < 0.0 {
        lower.conj()
    } else {
        lower
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Opening {
    TowardMinusX,
    TowardPlusX,
}

/// `y^2 = coefficient * |x - vertex|` on the `opening` side of the vertex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParabolaModel {
    #[serde(rename = "type")]
    pub eig_type: EigType,
    pub n: Dimension,
    pub vertex: f64,
    pub coefficient: f64,
    pub opening: Opening,
}

impl ParabolaModel {
    /// Model value of `y^2` at abscissa `x`; negative on the closed side.
    pub fn y_squared(&self, x: f64) -> f64 {
        match self.opening {
            Opening::TowardMinusX => self.coefficient * (self.vertex - x),
            Opening::TowardPlusX => self.coefficient * (x - self.vertex),
        }
    }
}

pub fn parabola_model(n: Dimension, t: EigType) -> ParabolaModel {
    let nf = n.as_f64();
    match t {
        EigType::Type1 => {
            let x = xi(n);
            ParabolaModel {
                eig_type: t,
                n,
                vertex: x,
                coefficient: 10.0 * nf * x / (nf * nf + 5.0 * nf + 1.0),
                opening: Opening::TowardMinusX,
            }
        }
        EigType::Type2 => {
            let d = nf * nf - 5.0 * nf + 1.0;
            // n^2 - 5n + 1 has no integer roots.
            assert!(d != 0.0);
            ParabolaModel {
                eig_type: t,
                n,
                vertex: 1.0,
                coefficient: 10.0 * nf / d.abs(),
                opening: if d < 0.0 { Opening::TowardMinusX } else { Opening::TowardPlusX },
            }
        }
    }
}
