//! Dual-mode numbers.
//!
//! Geometry code is written once against the [`Field`] trait and instantiated
//! either with exact rationals ([`Rational`]) or with `f64`. The mode-tagged
//! [`Scalar`] is the value that crosses API and file boundaries; combining an
//! exact and a float scalar is an error rather than a silent promotion.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Sphere-membership tolerance for float mode.
pub const NORM_TOL: f64 = 1e-9;
/// Tolerance for comparing couplings and sign tests in float mode.
pub const DOT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exact,
    Float,
}

/// Ordered field used by the geometry kernels.
///
/// For `f64` every sign test is taken relative to [`DOT_TOL`], so "zero"
/// means "within tolerance of zero". For rationals the tests are exact.
pub trait Field:
    Clone
    + fmt::Debug
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const MODE: Mode;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn to_f64(&self) -> f64;
    fn sign(&self) -> Ordering;
    fn to_scalar(&self) -> Scalar;
    fn from_scalar(s: &Scalar) -> Result<Self>;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    fn is_zero(&self) -> bool {
        self.sign() == Ordering::Equal
    }

    fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    fn is_negative(&self) -> bool {
        self.sign() == Ordering::Less
    }

    fn abs(&self) -> Self {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Tolerance-aware comparison.
    fn cmp_tol(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).sign()
    }

    fn approx_eq(&self, other: &Self) -> bool {
        self.cmp_tol(other) == Ordering::Equal
    }

    fn max_of(a: Self, b: Self) -> Self {
        if a.cmp_tol(&b) == Ordering::Less {
            b
        } else {
            a
        }
    }

    fn min_of(a: Self, b: Self) -> Self {
        if a.cmp_tol(&b) == Ordering::Greater {
            b
        } else {
            a
        }
    }
}

impl Field for Rational {
    const MODE: Mode = Mode::Exact;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn sign(&self) -> Ordering {
        if Signed::is_positive(self) {
            Ordering::Greater
        } else if Signed::is_negative(self) {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
    fn to_scalar(&self) -> Scalar {
        Scalar::Exact(self.clone())
    }
    fn from_scalar(s: &Scalar) -> Result<Self> {
        match s {
            Scalar::Exact(q) => Ok(q.clone()),
            Scalar::Float(_) => Err(Error::ModeMismatch),
        }
    }
}

impl Field for f64 {
    const MODE: Mode = Mode::Float;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn sign(&self) -> Ordering {
        if *self > DOT_TOL {
            Ordering::Greater
        } else if *self < -DOT_TOL {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
    fn to_scalar(&self) -> Scalar {
        Scalar::Float(*self)
    }
    fn from_scalar(s: &Scalar) -> Result<Self> {
        match s {
            Scalar::Float(v) => Ok(*v),
            Scalar::Exact(_) => Err(Error::ModeMismatch),
        }
    }
}

/// A number that is either an exact rational or a binary float.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(Rational),
    Float(f64),
}

impl Scalar {
    pub fn int(v: i64) -> Self {
        Scalar::Exact(<Rational as Field>::from_i64(v))
    }

    pub fn ratio(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar::Exact(Rational::new(BigInt::from(num), BigInt::from(den))))
    }

    pub fn mode(&self) -> Mode {
        match self {
            Scalar::Exact(_) => Mode::Exact,
            Scalar::Float(_) => Mode::Float,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(q) => Field::to_f64(q),
            Scalar::Float(v) => *v,
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Scalar::Exact(q) => Some(q),
            Scalar::Float(_) => None,
        }
    }

    /// Converts to float mode; exact values are rounded to the nearest `f64`.
    pub fn to_float(&self) -> Scalar {
        Scalar::Float(self.to_f64())
    }

    /// Converts to exact mode. Floats convert to the exact binary value they hold.
    pub fn to_exact(&self) -> Result<Scalar> {
        match self {
            Scalar::Exact(_) => Ok(self.clone()),
            Scalar::Float(v) => BigRational::from_f64(*v)
                .map(Scalar::Exact)
                .ok_or_else(|| Error::InvalidInput(format!("non-finite value {v}"))),
        }
    }

    pub fn checked_add(&self, rhs: &Scalar) -> Result<Scalar> {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(a + b)),
            (Scalar::Float(a), Scalar::Float(b)) => Ok(Scalar::Float(a + b)),
            _ => Err(Error::ModeMismatch),
        }
    }

    pub fn checked_sub(&self, rhs: &Scalar) -> Result<Scalar> {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(a - b)),
            (Scalar::Float(a), Scalar::Float(b)) => Ok(Scalar::Float(a - b)),
            _ => Err(Error::ModeMismatch),
        }
    }

    pub fn checked_mul(&self, rhs: &Scalar) -> Result<Scalar> {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(a * b)),
            (Scalar::Float(a), Scalar::Float(b)) => Ok(Scalar::Float(a * b)),
            _ => Err(Error::ModeMismatch),
        }
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar> {
        match (self, rhs) {
            (Scalar::Exact(_), Scalar::Exact(b)) if Zero::is_zero(b) => Err(Error::DivisionByZero),
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(a / b)),
            (Scalar::Float(_), Scalar::Float(b)) if *b == 0.0 => Err(Error::DivisionByZero),
            (Scalar::Float(a), Scalar::Float(b)) => Ok(Scalar::Float(a / b)),
            _ => Err(Error::ModeMismatch),
        }
    }

    /// Parses `"p/q"`, an integer, or a finite decimal such as `"-0.25"`, exactly.
    pub fn parse_exact(text: &str) -> Result<Scalar> {
        parse_rational(text).map(Scalar::Exact)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(q) => f.write_str(&format_rational(q)),
            Scalar::Float(v) => f.write_str(&format_float(*v)),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact(q) => serializer.serialize_str(&format_rational(q)),
            Scalar::Float(v) => serializer.serialize_f64(*v),
        }
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let value = serde_json::Value::deserialize(deserializer)?;
        scalar_from_json(&value).map_err(serde::de::Error::custom)
    }
}

/// JSON strings and integers are exact; non-integral JSON numbers are floats.
pub fn scalar_from_json(value: &serde_json::Value) -> Result<Scalar> {
    match value {
        serde_json::Value::String(s) => Scalar::parse_exact(s),
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Scalar::int(i))
            } else if let Some(v) = n.as_f64() {
                Ok(Scalar::Float(v))
            } else {
                Err(Error::Parse(format!("unrepresentable number {n}")))
            }
        }
        other => Err(Error::Parse(format!("expected a number or \"p/q\" string, got {other}"))),
    }
}

pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    if let Some((num, den)) = t.split_once('/') {
        let num = BigInt::from_str(num.trim()).map_err(|_| bad())?;
        let den = BigInt::from_str(den.trim()).map_err(|_| bad())?;
        if Zero::is_zero(&den) {
            return Err(Error::DivisionByZero);
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((int, frac)) = t.split_once('.') {
        let negative = int.trim_start().starts_with('-');
        let int_part = if int.is_empty() || int == "-" || int == "+" {
            BigInt::zero()
        } else {
            BigInt::from_str(int).map_err(|_| bad())?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac_part = BigInt::from_str(frac).map_err(|_| bad())?;
        let magnitude = int_part.abs() * &scale + frac_part;
        let num = if negative { -magnitude } else { magnitude };
        return Ok(Rational::new(num, scale));
    }
    BigInt::from_str(t).map(Rational::from_integer).map_err(|_| bad())
}

/// `"p/q"` in lowest terms, or `"p"` for integers.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Seventeen significant digits, scientific notation.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v:.16e}")
    }
}

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}
