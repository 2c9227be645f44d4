//! Problem instances: validation, survival products and the JSON file format.

use std::fmt;

use num_rational::BigRational;
use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{check_index, Error, Result};
use crate::scalar::{parse_fraction, ExtendedReal, NumericMode, Scalar};

/// `n` independent Bernoulli trials with success probabilities `p` and
/// payoffs `w` for stopping on the last success.
///
/// All accessors are 1-based. Index 0 is reserved for the auxiliary payoff
/// `w_0 = 0`.
#[derive(Debug, Clone)]
pub struct ProblemInstance<T> {
    p: Vec<T>,
    w: Vec<T>,
    // certain[k] = number of i <= k with p_i = 1
    certain: Vec<u32>,
    // survival accumulator over the factors 1 - p_i with p_i < 1, prefix form
    acc: Vec<T>,
}

/// Build a validated instance. Never clamps: every violation is reported.
pub fn validate<T: Scalar>(p: Vec<T>, w: Vec<T>) -> Result<ProblemInstance<T>> {
    ProblemInstance::new(p, w)
}

impl<T: Scalar> ProblemInstance<T> {
    pub fn new(p: Vec<T>, w: Vec<T>) -> Result<Self> {
        if p.len() != w.len() {
            return Err(Error::LengthMismatch {
                p_len: p.len(),
                w_len: w.len(),
            });
        }
        if p.is_empty() {
            return Err(Error::EmptyInstance);
        }
        for (i, pk) in p.iter().enumerate() {
            let in_range = pk.is_finite() && *pk >= T::zero() && *pk <= T::one();
            if !in_range {
                return Err(Error::ProbabilityOutOfRange {
                    index: i + 1,
                    value: pk.to_string(),
                });
            }
        }
        for (i, wk) in w.iter().enumerate() {
            if !(wk.is_finite() && *wk > T::zero()) {
                return Err(Error::NonPositivePayoff {
                    index: i + 1,
                    value: wk.to_string(),
                });
            }
        }

        let n = p.len();
        let mut certain = Vec::with_capacity(n + 1);
        let mut acc = Vec::with_capacity(n + 1);
        certain.push(0u32);
        acc.push(T::survival_seed());
        for pk in &p {
            let last = certain[certain.len() - 1];
            let prev = &acc[acc.len() - 1];
            if pk.is_one() {
                certain.push(last + 1);
                acc.push(prev.clone());
            } else {
                certain.push(last);
                acc.push(T::survival_push(prev, pk));
            }
        }
        Ok(Self { p, w, certain, acc })
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }

    pub fn mode(&self) -> NumericMode {
        T::MODE
    }

    /// `p_k` for `1 <= k <= n`.
    pub fn p(&self, k: usize) -> &T {
        &self.p[k - 1]
    }

    /// `w_k` for `0 <= k <= n`, with `w_0 = 0`.
    pub fn w(&self, k: usize) -> T {
        if k == 0 {
            T::zero()
        } else {
            self.w[k - 1].clone()
        }
    }

    pub fn probabilities(&self) -> &[T] {
        &self.p
    }

    pub fn payoffs(&self) -> &[T] {
        &self.w
    }

    /// Odds ratio `p_k / (1 - p_k)`, infinite when `p_k = 1`.
    pub fn odds_ratio(&self, k: usize) -> ExtendedReal<T> {
        ExtendedReal::odds(self.p(k))
    }

    /// `∏_{i=a}^{b} (1 - p_i)`; the empty range `a > b` gives 1.
    pub fn survival_product(&self, a: usize, b: usize) -> Result<T> {
        let n = self.n();
        check_index(a, 1, n + 1)?;
        check_index(b, 0, n)?;
        Ok(self.survival(a, b))
    }

    /// Unchecked form of [`survival_product`](Self::survival_product).
    pub(crate) fn survival(&self, a: usize, b: usize) -> T {
        if a > b {
            return T::one();
        }
        if self.certain[b] > self.certain[a - 1] {
            return T::zero();
        }
        T::survival_span(&self.acc[a - 1], &self.acc[b])
    }

    /// Same probabilities with every payoff multiplied by `factor > 0`.
    pub fn scale_payoffs(&self, factor: &T) -> Result<Self> {
        let w = self.w.iter().map(|x| x.clone() * factor.clone()).collect();
        Self::new(self.p.clone(), w)
    }
}

/// A number as written in an instance file: an exact fraction or a binary
/// float. Decimal literals are floats; integers and `"a/b"` strings are exact.
#[derive(Debug, Clone, PartialEq)]
pub enum Entry {
    Exact(BigRational),
    Float(f64),
}

impl Entry {
    pub fn parse(s: &str) -> Result<Self> {
        if let Some(r) = parse_fraction(s) {
            return Ok(Entry::Exact(r));
        }
        s.trim()
            .parse::<f64>()
            .map(Entry::Float)
            .map_err(|_| Error::Parse(s.to_string()))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Entry::Exact(_))
    }

    pub fn to_scalar<T: Scalar>(&self) -> Result<T> {
        match self {
            Entry::Exact(r) => Ok(T::from_rational(r)),
            Entry::Float(x) => T::from_f64(*x).ok_or_else(|| {
                Error::Format(format!("decimal literal {x} cannot be used in exact mode"))
            }),
        }
    }

    /// Entry that reproduces a solver value when read back.
    pub fn from_scalar<T: Scalar>(x: &T) -> Self {
        match T::MODE {
            NumericMode::ExactRational => {
                Entry::Exact(parse_fraction(&x.to_string()).expect("rational display"))
            }
            NumericMode::Float => Entry::Float(x.to_f64()),
        }
    }
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Entry::Exact(r) => write!(f, "{r}"),
            Entry::Float(x) => write!(f, "{x:?}"),
        }
    }
}

impl Serialize for Entry {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Entry::Exact(r) => serializer.serialize_str(&r.to_string()),
            Entry::Float(x) => serializer.serialize_f64(*x),
        }
    }
}

impl<'de> Deserialize<'de> for Entry {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(deserializer)?;
        match v {
            serde_json::Value::Number(num) => {
                if let Some(i) = num.as_i64() {
                    Ok(Entry::Exact(BigRational::from_integer(i.into())))
                } else if let Some(u) = num.as_u64() {
                    Ok(Entry::Exact(BigRational::from_integer(u.into())))
                } else {
                    num.as_f64()
                        .map(Entry::Float)
                        .ok_or_else(|| de::Error::custom("unrepresentable number"))
                }
            }
            serde_json::Value::String(s) => Entry::parse(&s).map_err(de::Error::custom),
            other => Err(de::Error::custom(format!(
                "expected a number or a fraction string, got {other}"
            ))),
        }
    }
}

/// On-disk instance: `{"p": [...], "w": [...]}` with numbers or `"a/b"` strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub p: Vec<Entry>,
    pub w: Vec<Entry>,
}

impl InstanceFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("instance serialization")
    }

    /// Exact when every entry is a fraction, float otherwise.
    pub fn natural_mode(&self) -> NumericMode {
        if self.p.iter().chain(&self.w).all(Entry::is_exact) {
            NumericMode::ExactRational
        } else {
            NumericMode::Float
        }
    }

    pub fn build<T: Scalar>(&self) -> Result<ProblemInstance<T>> {
        let p = self.p.iter().map(Entry::to_scalar).collect::<Result<Vec<T>>>()?;
        let w = self.w.iter().map(Entry::to_scalar).collect::<Result<Vec<T>>>()?;
        validate(p, w)
    }

    pub fn from_instance<T: Scalar>(inst: &ProblemInstance<T>) -> Self {
        Self {
            p: inst.probabilities().iter().map(Entry::from_scalar).collect(),
            w: inst.payoffs().iter().map(Entry::from_scalar).collect(),
        }
    }
}
