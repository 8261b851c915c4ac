//! Scalar backends.
//!
//! Every network, matrix and batch is generic over [`Scalar`]. Two backends
//! ship: exact rationals ([`Rational`]) whose ranks come from Gaussian
//! elimination, and `f64` whose ranks are thresholded singular values.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};

/// Exact rational scalar.
pub type Rational = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarMode {
    Rational,
    Float,
}

impl ScalarMode {
    pub fn backend(self) -> Backend {
        match self {
            ScalarMode::Rational => Backend::Exact,
            ScalarMode::Float => Backend::Numeric,
        }
    }
}

/// How a rank was computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Numeric,
}

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const MODE: ScalarMode;

    fn from_ratio(num: i64, den: i64) -> Self;

    /// Exact for the rational backend (every finite double is a dyadic rational).
    fn from_f64(v: f64) -> Self;

    fn to_f64(&self) -> f64;

    fn is_finite(&self) -> bool;

    fn abs(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn relu(&self) -> Self {
        if *self > Self::zero() {
            self.clone()
        } else {
            Self::zero()
        }
    }

    /// Ternary sign. Values with `|v| <= zero_tol` map to 0 in float mode;
    /// the rational backend ignores the tolerance.
    fn sign(&self, zero_tol: f64) -> i8;

    /// Equality up to `tol` in float mode, exact equality otherwise.
    fn approx_eq(&self, other: &Self, tol: f64) -> bool;

    /// Rank with this backend; `tol` is the relative singular-value cutoff
    /// and is ignored by the exact backend.
    fn rank(m: &Matrix<Self>, tol: f64) -> usize;

    fn to_json(&self) -> Value;

    fn from_json(v: &Value) -> Result<Self>;
}

impl Scalar for Rational {
    const MODE: ScalarMode = ScalarMode::Rational;

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_f64(v: f64) -> Self {
        BigRational::from_float(v).expect("finite float")
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_finite(&self) -> bool {
        true
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn sign(&self, _zero_tol: f64) -> i8 {
        if self.is_zero() {
            0
        } else if self.is_positive() {
            1
        } else {
            -1
        }
    }

    fn approx_eq(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }

    fn rank(m: &Matrix<Self>, _tol: f64) -> usize {
        linalg::rank_exact(m)
    }

    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => parse_rational(s),
            Value::Number(n) if n.is_i64() => Ok(Self::from_integer(BigInt::from(n.as_i64().unwrap()))),
            other => Err(Error::Schema(format!(
                "rational entries must be \"p/q\" strings or integers, got {other}"
            ))),
        }
    }
}

impl Scalar for f64 {
    const MODE: ScalarMode = ScalarMode::Float;

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn from_f64(v: f64) -> Self {
        v
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn sign(&self, zero_tol: f64) -> i8 {
        if f64::abs(*self) <= zero_tol {
            0
        } else if *self > 0.0 {
            1
        } else {
            -1
        }
    }

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        f64::abs(self - other) <= tol
    }

    fn rank(m: &Matrix<Self>, tol: f64) -> usize {
        linalg::rank_numeric(m, tol).expect("matrix entries are finite by construction")
    }

    fn to_json(&self) -> Value {
        serde_json::Number::from_f64(*self).map(Value::Number).unwrap_or(Value::Null)
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Number(n) => n
                .as_f64()
                .ok_or_else(|| Error::Schema(format!("unrepresentable number {n}"))),
            other => Err(Error::Schema(format!("float entries must be JSON numbers, got {other}"))),
        }
    }
}

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"-0.25"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Schema(format!("cannot parse {s:?} as a rational"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Schema(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(p, q));
    }
    if let Ok(p) = s.parse::<BigInt>() {
        return Ok(BigRational::from_integer(p));
    }
    // Decimal notation: the literal value, not its nearest double.
    let (neg, digits) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = digits.split_once('.').ok_or_else(bad)?;
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) || (int.is_empty() && frac.is_empty()) {
        return Err(bad());
    }
    let numer: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let denom = num_traits::pow(BigInt::from(10), frac.len());
    let q = BigRational::new(numer, denom);
    Ok(if neg { -q } else { q })
}

/// Shorthand for building exact rationals in examples and tests.
pub fn q(num: i64, den: i64) -> Rational {
    Rational::from_ratio(num, den)
}

/// Shorthand for an integer-valued scalar.
pub fn int<S: Scalar>(v: i64) -> S {
    S::from_ratio(v, 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fraction_integer_and_decimal() {
        assert_eq!(parse_rational("5/2").unwrap(), q(5, 2));
        assert_eq!(parse_rational("-7").unwrap(), q(-7, 1));
        assert_eq!(parse_rational("-0.25").unwrap(), q(-1, 4));
        assert_eq!(parse_rational("0.1").unwrap(), q(1, 10));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn float_sign_snaps_to_zero() {
        assert_eq!(1e-13f64.sign(1e-12), 0);
        assert_eq!((-1e-11f64).sign(1e-12), -1);
        assert_eq!(q(0, 1).sign(1.0), 0);
        assert_eq!(q(-1, 1000).sign(1.0), -1);
    }

    #[test]
    fn rational_json_is_string() {
        assert_eq!(q(5, 2).to_json(), Value::String("5/2".into()));
        assert_eq!(Rational::from_json(&q(5, 2).to_json()).unwrap(), q(5, 2));
        assert!(Rational::from_json(&serde_json::json!(0.5)).is_err());
    }
}
