//! Scalar types that character values can live in.
//!
//! The formulas in this crate are exact identities, so the reference scalar is
//! [`Rational`](crate::Rational). Floating types are supported for spot checks
//! and comparisons; their equality is tolerance based.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, ToPrimitive, Zero};

/// Field-like scalar used for class function values and coefficients.
pub trait Scalar: Num + Neg<Output = Self> + Clone + Debug + Send + Sync + 'static {
    fn from_int(v: i64) -> Self;

    /// Equality test: exact for rationals, relative tolerance for floats.
    fn approx_eq(&self, other: &Self) -> bool;

    fn is_integral(&self) -> bool;

    fn to_f64(&self) -> f64;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_int(num) / Self::from_int(den)
    }

    fn is_approx_zero(&self) -> bool {
        self.approx_eq(&Self::zero())
    }
}

impl Scalar for BigRational {
    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }

    fn is_integral(&self) -> bool {
        self.is_integer()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

const F64_TOL: f64 = 1e-9;
const F32_TOL: f32 = 1e-4;

impl Scalar for f64 {
    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn approx_eq(&self, other: &Self) -> bool {
        let scale = 1f64.max(self.abs()).max(other.abs());
        (self - other).abs() <= F64_TOL * scale
    }

    fn is_integral(&self) -> bool {
        self.approx_eq(&self.round())
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for f32 {
    fn from_int(v: i64) -> Self {
        v as f32
    }

    fn approx_eq(&self, other: &Self) -> bool {
        let scale = 1f32.max(self.abs()).max(other.abs());
        (self - other).abs() <= F32_TOL * scale
    }

    fn is_integral(&self) -> bool {
        self.approx_eq(&self.round())
    }

    fn to_f64(&self) -> f64 {
        *self as f64
    }
}

/// Formats a rational as `p` or `p/q`.
pub fn rational_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p` or `p/q`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// Serde adapter writing rationals as `"p/q"` strings.
pub mod serde_rational {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rational_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).ok_or_else(|| de::Error::custom(format!("bad rational {s:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_text_round_trip() {
        let r = BigRational::from_ratio(-6, 4);
        assert_eq!(rational_string(&r), "-3/2");
        assert_eq!(parse_rational("-3/2"), Some(r));
        assert_eq!(parse_rational("7"), Some(BigRational::from_int(7)));
        assert_eq!(parse_rational("1/0"), None);
    }

    #[test]
    fn float_tolerance() {
        assert!(0.1f64.approx_eq(&(0.3 - 0.2)));
        assert!(!1.0f64.approx_eq(&1.001));
        assert!((2.0f64 + 1e-12).is_integral());
    }
}
