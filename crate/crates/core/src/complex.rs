//! Text format for complex numbers.
//!
//! Literals look like `1.5-0.25i`, `2i`, `-i`, `0.7` or `1e-3+2e-4i`. The
//! Unicode minus sign is accepted in place of `-`. Printing uses the
//! shortest decimal that parses back to the same `f64`, so a printed value
//! always round-trips bit for bit.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// A finite complex number with an exact text round trip.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ComplexPoint(pub Complex64);

impl ComplexPoint {
    pub fn new(re: f64, im: f64) -> Self {
        ComplexPoint(Complex64::new(re, im))
    }

    pub fn re(&self) -> f64 {
        self.0.re
    }

    pub fn im(&self) -> f64 {
        self.0.im
    }
}

impl From<Complex64> for ComplexPoint {
    fn from(z: Complex64) -> Self {
        ComplexPoint(z)
    }
}

impl From<ComplexPoint> for Complex64 {
    fn from(p: ComplexPoint) -> Self {
        p.0
    }
}

/// Shortest round-trip decimal for a real number.
///
/// Integral values print without a fractional part (`-6`, `0`), moderate
/// magnitudes in positional notation and everything else in exponent form.
pub fn format_real(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn format_complex(z: Complex64) -> String {
    let mut s = format_real(z.re);
    if z.im != 0.0 || z.im.is_sign_negative() {
        if z.im.is_sign_negative() {
            s.push('-');
        } else {
            s.push('+');
        }
        s.push_str(&format_real(z.im.abs()));
        s.push('i');
    }
    s
}

fn parse_real(s: &str, whole: &str) -> Result<f64, Error> {
    let bad = || Error::ParseComplex(whole.to_string());
    // f64::from_str accepts "inf"/"nan"; the grammar does not.
    if s.is_empty() || s.chars().any(|c| c.is_ascii_alphabetic() && c != 'e' && c != 'E') {
        return Err(bad());
    }
    let x: f64 = s.parse().map_err(|_| bad())?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(bad())
    }
}

fn parse_imag_coeff(s: &str, whole: &str) -> Result<f64, Error> {
    match s {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => parse_real(s, whole),
    }
}

pub fn parse_complex(text: &str) -> Result<Complex64, Error> {
    let s: String = text.trim().replace('\u{2212}', "-");
    if s.is_empty() {
        return Err(Error::ParseComplex(text.to_string()));
    }
    let bytes = s.as_bytes();
    // Split point: a sign that is neither leading nor part of an exponent.
    let split = (1..bytes.len()).rev().find(|&k| {
        (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E')
    });
    if let Some(body) = s.strip_suffix('i') {
        match split {
            Some(k) => {
                let re = parse_real(&s[..k], text)?;
                let im = parse_imag_coeff(&body[k..], text)?;
                Ok(Complex64::new(re, im))
            }
            _ => Ok(Complex64::new(0.0, parse_imag_coeff(body, text)?)),
        }
    } else {
        if split.is_some() {
            return Err(Error::ParseComplex(text.to_string()));
        }
        Ok(Complex64::new(parse_real(&s, text)?, 0.0))
    }
}

impl fmt::Display for ComplexPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_complex(self.0))
    }
}

impl FromStr for ComplexPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_complex(s).map(ComplexPoint)
    }
}

impl Serialize for ComplexPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ComplexPoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_literal_forms() {
        assert_eq!(parse_complex("1.5-0.25i").unwrap(), Complex64::new(1.5, -0.25));
        assert_eq!(parse_complex("2i").unwrap(), Complex64::new(0.0, 2.0));
        assert_eq!(parse_complex("-2i").unwrap(), Complex64::new(0.0, -2.0));
        assert_eq!(parse_complex("\u{2212}2i").unwrap(), Complex64::new(0.0, -2.0));
        assert_eq!(parse_complex("i").unwrap(), Complex64::new(0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(parse_complex("1.2").unwrap(), Complex64::new(1.2, 0.0));
        assert_eq!(parse_complex("-3").unwrap(), Complex64::new(-3.0, 0.0));
        assert_eq!(parse_complex("1e-3+2e-4i").unwrap(), Complex64::new(1e-3, 2e-4));
        assert_eq!(parse_complex("1E+2-i").unwrap(), Complex64::new(100.0, -1.0));
        assert_eq!(
            parse_complex("0.77570-1.49222i").unwrap(),
            Complex64::new(0.77570, -1.49222)
        );
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "abc", "1+2", "1+2j", "inf", "nan+1i", "1..2", "+-1i", "1i2"] {
            assert!(parse_complex(bad).is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn prints_compactly() {
        assert_eq!(format_complex(Complex64::new(1.4, 0.0)), "1.4");
        assert_eq!(format_complex(Complex64::new(-6.0, 0.0)), "-6");
        assert_eq!(format_complex(Complex64::new(1.5, -0.25)), "1.5-0.25i");
        assert_eq!(format_complex(Complex64::new(0.0, 2.0)), "0+2i");
        assert_eq!(format_real(1e-20), "1e-20");
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(re in prop::num::f64::NORMAL | prop::num::f64::ZERO,
                                  im in prop::num::f64::NORMAL | prop::num::f64::ZERO) {
            let z = Complex64::new(re, im);
            let back = parse_complex(&format_complex(z)).unwrap();
            prop_assert_eq!(back.re.to_bits(), re.to_bits());
            prop_assert_eq!(back.im.to_bits(), im.to_bits());
        }
    }
}
