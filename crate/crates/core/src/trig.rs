//! Complex sines and cosines of `k mu / 2` for integer `k`.
//!
//! Two things go wrong with the naive `(k * mu / 2).sin()`:
//!
//! * near `Re mu = 0, ±pi` the result is tiny and the argument reduction
//!   inside `sin` loses relative accuracy; we reduce against the nearest
//!   multiple of `pi` ourselves and use exact values at multiples of `pi/2`;
//! * for large `|Im mu|` the hyperbolic factors overflow; each value is
//!   returned as `mantissa * exp(exponent)` so that ratios never build the
//!   large intermediate.

use std::f64::consts::PI;

use num_complex::Complex64;

const SCALE_SWITCH: f64 = 20.0;

/// A complex number stored as `mantissa * exp(exponent)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Scaled {
    pub mantissa: Complex64,
    pub exponent: f64,
}

impl Scaled {
    #[cfg(test)]
    pub fn value(self) -> Complex64 {
        self.mantissa * self.exponent.exp()
    }

    pub fn ln_abs(self) -> f64 {
        self.mantissa.norm().ln() + self.exponent
    }

    pub fn div(self, other: Scaled) -> Complex64 {
        self.mantissa / other.mantissa * (self.exponent - other.exponent).exp()
    }
}

/// `(sin(k u / 2), cos(k u / 2))` for real `u`, reduced against the nearest
/// multiple of `pi`.
pub(crate) fn sin_cos_half(k: i64, u: f64) -> (f64, f64) {
    let r = (u / PI).round();
    let delta = u - r * PI;
    let x = k as f64 * delta / 2.0;
    let (s, c) = x.sin_cos();
    // k r pi / 2 is a multiple of pi/2; q picks the quadrant.
    let q = ((k as i128) * (r as i128)).rem_euclid(4);
    match q {
        0 => (s, c),
        1 => (c, -s),
        2 => (-s, -c),
        _ => (-c, s),
    }
}

fn hyperbolic(y: f64) -> (f64, f64, f64) {
    // (cosh y, sinh y, exponent) with the exponent factored out when large.
    if y.abs() <= SCALE_SWITCH {
        (y.cosh(), y.sinh(), 0.0)
    } else {
        let t = (-2.0 * y.abs()).exp();
        (0.5 * (1.0 + t), 0.5 * y.signum() * (1.0 - t), y.abs())
    }
}

/// `sin(k mu / 2)`.
pub(crate) fn sin_half(k: i64, mu: Complex64) -> Scaled {
    let (s, c) = sin_cos_half(k, mu.re);
    let (ch, sh, e) = hyperbolic(k as f64 * mu.im / 2.0);
    Scaled { mantissa: Complex64::new(s * ch, c * sh), exponent: e }
}

/// `cos(k mu / 2)`.
pub(crate) fn cos_half(k: i64, mu: Complex64) -> Scaled {
    let (s, c) = sin_cos_half(k, mu.re);
    let (ch, sh, e) = hyperbolic(k as f64 * mu.im / 2.0);
    Scaled { mantissa: Complex64::new(c * ch, -s * sh), exponent: e }
}
