//! Exact rationals and convex-combination coefficients.
//!
//! Both types serialize as `"p/q"` strings so reports and descriptors
//! round-trip losslessly.

use alloc::format;
use alloc::string::ToString;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{validation, Error, Result};

/// An exact rational number of unbounded size, always in lowest terms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    /// `numer / denom`. Panics if `denom == 0`.
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_big(numer: BigInt, denom: BigInt) -> Result<Self> {
        if denom.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(Rational(BigRational::new(numer, denom)))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    /// Nearest `f64`, for display and for the floating application layer.
    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts `p/q`, a bare integer `p`, or a finite decimal such as `-0.25`.
impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a rational: {s:?}"));
        if let Some((p, q)) = s.split_once('/') {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            return Rational::from_big(p, q);
        }
        if let Some((int, frac)) = s.split_once('.') {
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let negative = int.starts_with('-');
            let int_part = if int.is_empty() || int == "-" || int == "+" {
                BigInt::zero()
            } else {
                BigInt::from_str(int).map_err(|_| bad())?
            };
            let scale = num_traits::pow(BigInt::from(10u32), frac.len());
            let frac_part = BigInt::from_str(frac).map_err(|_| bad())?;
            let magnitude = int_part.abs() * &scale + frac_part;
            let numer = if negative { -magnitude } else { magnitude };
            return Rational::from_big(numer, scale);
        }
        let p = BigInt::from_str(s).map_err(|_| bad())?;
        Ok(Rational(BigRational::from_integer(p)))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> core::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

struct RationalVisitor;

impl Visitor<'_> for RationalVisitor {
    type Value = Rational;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("a rational as \"p/q\" or an integer")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> core::result::Result<Rational, E> {
        Rational::from_str(v).map_err(E::custom)
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> core::result::Result<Rational, E> {
        Ok(Rational::from_integer(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> core::result::Result<Rational, E> {
        Ok(Rational(BigRational::from_integer(BigInt::from(v))))
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> core::result::Result<Self, D::Error> {
        deserializer.deserialize_any(RationalVisitor)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Div<&Rational> for &Rational {
    type Output = Rational;
    /// Panics on division by zero.
    fn div(self, rhs: &Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero");
        Rational(&self.0 / &rhs.0)
    }
}

impl Div<Rational> for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        &self / &rhs
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl core::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> core::iter::Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

/// A convex-combination coefficient: an exact rational in `[0, 1]`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coeff(Rational);

impl Coeff {
    /// `numer / denom`, rejected unless it lies in `[0, 1]`.
    pub fn new(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(validation!("zero denominator"));
        }
        Coeff::try_from(Rational::new(numer, denom))
    }

    /// Like [`Coeff::new`] but panics on out-of-range input. Meant for
    /// literals in tests and fixtures.
    pub fn of(numer: i64, denom: i64) -> Self {
        Coeff::new(numer, denom).expect("coefficient outside [0,1]")
    }

    pub fn zero() -> Self {
        Coeff(Rational::zero())
    }

    pub fn one() -> Self {
        Coeff(Rational::one())
    }

    pub fn half() -> Self {
        Coeff(Rational::new(1, 2))
    }

    /// `1 - self`.
    pub fn complement(&self) -> Self {
        Coeff(Rational::one() - &self.0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    /// Strictly between zero and one.
    pub fn is_interior(&self) -> bool {
        !self.is_zero() && !self.is_one()
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    pub fn into_value(self) -> Rational {
        self.0
    }

    /// Product of two coefficients, which stays in `[0, 1]`.
    pub fn mul(&self, other: &Coeff) -> Coeff {
        Coeff(&self.0 * &other.0)
    }

    /// `self / other` if the quotient is again a coefficient.
    pub fn ratio(&self, other: &Coeff) -> Result<Coeff> {
        if other.is_zero() {
            return Err(validation!("ratio by zero coefficient"));
        }
        Coeff::try_from(&self.0 / &other.0)
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }
}

impl TryFrom<Rational> for Coeff {
    type Error = Error;

    fn try_from(r: Rational) -> Result<Self> {
        if r.is_negative() || r > Rational::one() {
            return Err(validation!("coefficient {r} outside [0,1]"));
        }
        Ok(Coeff(r))
    }
}

impl From<Coeff> for Rational {
    fn from(c: Coeff) -> Rational {
        c.0
    }
}

impl FromStr for Coeff {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Coeff::try_from(Rational::from_str(s)?)
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl Serialize for Coeff {
    fn serialize<S: Serializer>(&self, serializer: S) -> core::result::Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Coeff {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> core::result::Result<Self, D::Error> {
        let r = Rational::deserialize(deserializer)?;
        Coeff::try_from(r).map_err(de::Error::custom)
    }
}

/// Parses a `"p/q"` coefficient literal, used by fixtures and tests.
pub fn parse_coeff(s: &str) -> Result<Coeff> {
    Coeff::from_str(s)
}
