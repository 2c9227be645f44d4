//! Numeric back ends shared by every solver.
//!
//! Two modes are supported: exact arbitrary-precision fractions
//! ([`BigRational`]) and binary64 floats. Float mode accumulates survival
//! products in log space and compares decision quantities with the absolute
//! tolerance [`EPS_CMP`].

use std::fmt;
use std::ops::{Add, Div, Mul, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Absolute tolerance for float-mode stop/continue comparisons.
pub const EPS_CMP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NumericMode {
    #[serde(rename = "exact")]
    ExactRational,
    Float,
}

impl fmt::Display for NumericMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumericMode::ExactRational => f.write_str("exact"),
            NumericMode::Float => f.write_str("float"),
        }
    }
}

/// Arithmetic needed by the solvers, implemented for `f64` and [`BigRational`].
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialOrd
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + 'static
{
    const MODE: NumericMode;

    fn from_ratio(num: i64, den: u64) -> Self;

    fn from_rational(r: &BigRational) -> Self;

    /// `None` when the mode cannot represent a binary float (exact mode).
    fn from_f64(x: f64) -> Option<Self>;

    fn to_f64(&self) -> f64;

    fn is_finite(&self) -> bool {
        true
    }

    /// `self > other`, with float mode requiring a margin of [`EPS_CMP`].
    fn exceeds(&self, other: &Self) -> bool;

    /// True when the value is zero, or within [`EPS_CMP`] of zero in float mode.
    fn is_negligible(&self) -> bool;

    /// Starting value of a running survival accumulator.
    fn survival_seed() -> Self;

    /// Fold the factor `1 - p` (with `p < 1`) into a running accumulator.
    fn survival_push(acc: &Self, p: &Self) -> Self;

    /// Product of the factors pushed between accumulator states `lo` and `hi`.
    fn survival_span(lo: &Self, hi: &Self) -> Self;

    fn to_json(&self) -> serde_json::Value;

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }
}

impl Scalar for f64 {
    const MODE: NumericMode = NumericMode::Float;

    fn from_ratio(num: i64, den: u64) -> Self {
        num as f64 / den as f64
    }

    fn from_rational(r: &BigRational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn from_f64(x: f64) -> Option<Self> {
        Some(x)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }

    fn exceeds(&self, other: &Self) -> bool {
        *self > *other + EPS_CMP
    }

    fn is_negligible(&self) -> bool {
        self.abs() < EPS_CMP
    }

    fn survival_seed() -> Self {
        0.0
    }

    fn survival_push(acc: &Self, p: &Self) -> Self {
        acc + (-p).ln_1p()
    }

    fn survival_span(lo: &Self, hi: &Self) -> Self {
        (hi - lo).exp()
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Number::from_f64(*self)
            .map(serde_json::Value::Number)
            .unwrap_or(serde_json::Value::Null)
    }
}

impl Scalar for BigRational {
    const MODE: NumericMode = NumericMode::ExactRational;

    fn from_ratio(num: i64, den: u64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn from_f64(_: f64) -> Option<Self> {
        None
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn exceeds(&self, other: &Self) -> bool {
        self > other
    }

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn survival_seed() -> Self {
        BigRational::one()
    }

    fn survival_push(acc: &Self, p: &Self) -> Self {
        acc * (BigRational::one() - p)
    }

    fn survival_span(lo: &Self, hi: &Self) -> Self {
        hi / lo
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(self.to_string())
    }
}

/// A real number or `+∞`. Houses odds ratios `p / (1 - p)`, which are
/// infinite exactly when `p = 1`.
#[derive(Debug, Clone, PartialEq)]
pub enum ExtendedReal<T> {
    Finite(T),
    PositiveInfinity,
}

impl<T: Scalar> ExtendedReal<T> {
    /// Odds ratio of a probability.
    pub fn odds(p: &T) -> Self {
        if p.is_one() {
            ExtendedReal::PositiveInfinity
        } else {
            ExtendedReal::Finite(p.clone() / (T::one() - p.clone()))
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtendedReal::PositiveInfinity)
    }

    pub fn finite(&self) -> Option<&T> {
        match self {
            ExtendedReal::Finite(x) => Some(x),
            ExtendedReal::PositiveInfinity => None,
        }
    }

    /// Multiply by a strictly positive finite factor.
    pub fn scale(self, by: &T) -> Self {
        match self {
            ExtendedReal::Finite(x) => ExtendedReal::Finite(x * by.clone()),
            ExtendedReal::PositiveInfinity => ExtendedReal::PositiveInfinity,
        }
    }

    /// `self >= x` for a finite `x`.
    pub fn at_least(&self, x: &T) -> bool {
        match self {
            ExtendedReal::Finite(v) => v >= x,
            ExtendedReal::PositiveInfinity => true,
        }
    }
}

impl<T: Scalar> Add for ExtendedReal<T> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => ExtendedReal::Finite(a + b),
            _ => ExtendedReal::PositiveInfinity,
        }
    }
}

impl<T: Scalar> fmt::Display for ExtendedReal<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::Finite(x) => write!(f, "{x}"),
            ExtendedReal::PositiveInfinity => f.write_str("inf"),
        }
    }
}

/// Parse `"a/b"`, an integer, or (float mode only) a decimal literal.
pub fn parse_fraction(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}
