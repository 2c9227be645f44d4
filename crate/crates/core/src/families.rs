//! Secretary-type families with known thresholds and limits.
//!
//! | name               | `p_k` | `w_k`       |
//! |--------------------|-------|-------------|
//! | `duration`         | `1/k` | `n - k + 1` |
//! | `minimal-duration` | `1/k` | `k`         |
//! | `uniform-small-p`  | `1/n` | `k`         |
//! | `constant-p`       | `p`   | `n - k + 1` |

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{validate, ProblemInstance};
use crate::odds::{odds_index, odds_value};
use crate::scalar::Scalar;
use crate::special::rumor_constant;

/// Above this size the harmonic threshold conditions are scanned in floats.
pub const EXACT_HARMONIC_LIMIT: usize = 1000;

/// Default size cap for [`asymptotic_report`].
pub const DEFAULT_SIZE_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyKind {
    BestChoiceDuration,
    BestChoiceMinimalDuration,
    UniformSmallP,
    ConstantP(BigRational),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub n: usize,
}

impl FamilyKind {
    pub const NAMES: [&'static str; 4] = ["duration", "minimal-duration", "uniform-small-p", "constant-p"];

    /// Look up a family by its CLI name; `constant-p` needs `prob`.
    pub fn from_name(name: &str, prob: Option<BigRational>) -> Result<Self> {
        let kind = match name {
            "duration" => FamilyKind::BestChoiceDuration,
            "minimal-duration" => FamilyKind::BestChoiceMinimalDuration,
            "uniform-small-p" => FamilyKind::UniformSmallP,
            "constant-p" => FamilyKind::ConstantP(
                prob.ok_or_else(|| Error::InvalidFamily("constant-p requires a probability".into()))?,
            ),
            other => {
                return Err(Error::InvalidFamily(format!(
                    "unknown family `{other}` (expected one of {})",
                    Self::NAMES.join(", ")
                )))
            }
        };
        Ok(kind)
    }

    pub fn name(&self) -> &'static str {
        match self {
            FamilyKind::BestChoiceDuration => "duration",
            FamilyKind::BestChoiceMinimalDuration => "minimal-duration",
            FamilyKind::UniformSmallP => "uniform-small-p",
            FamilyKind::ConstantP(_) => "constant-p",
        }
    }

    /// Limits of `s_n / n` and `E_n / n` as `n → ∞`.
    pub fn limits(&self) -> (f64, f64) {
        match self {
            FamilyKind::BestChoiceDuration => {
                let theta = rumor_constant();
                (theta, theta * (1.0 - theta))
            }
            FamilyKind::BestChoiceMinimalDuration => (0.5, 0.25),
            FamilyKind::UniformSmallP => {
                let a = std::f64::consts::SQRT_2 - 1.0;
                (a, a * (std::f64::consts::SQRT_2 - 2.0).exp())
            }
            FamilyKind::ConstantP(_) => (1.0, 0.0),
        }
    }

    pub fn with_n(&self, n: usize) -> FamilySpec {
        FamilySpec {
            kind: self.clone(),
            n,
        }
    }
}

impl FamilySpec {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidFamily("n must be at least 1".into()));
        }
        if let FamilyKind::ConstantP(p) = &self.kind {
            if !(*p > BigRational::zero() && *p < BigRational::one()) {
                return Err(Error::InvalidFamily(format!("constant-p needs 0 < p < 1, got {p}")));
            }
        }
        Ok(())
    }
}

fn int(x: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Materialize the family's probabilities and payoffs.
pub fn instantiate<T: Scalar>(spec: &FamilySpec) -> Result<ProblemInstance<T>> {
    spec.validate()?;
    let n = spec.n;
    let num = |x: usize| T::from_ratio(x as i64, 1);
    let (p, w): (Vec<T>, Vec<T>) = match &spec.kind {
        FamilyKind::BestChoiceDuration => (1..=n).map(|k| (T::from_ratio(1, k as u64), num(n - k + 1))).unzip(),
        FamilyKind::BestChoiceMinimalDuration => (1..=n).map(|k| (T::from_ratio(1, k as u64), num(k))).unzip(),
        FamilyKind::UniformSmallP => (1..=n).map(|k| (T::from_ratio(1, n as u64), num(k))).unzip(),
        FamilyKind::ConstantP(prob) => {
            let prob = T::from_rational(prob);
            (1..=n).map(|k| (prob.clone(), num(n - k + 1))).unzip()
        }
    };
    validate(p, w)
}

// Compensated (Neumaier) summation.
#[derive(Default)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Largest `k >= 2` whose harmonic condition holds, else 1.
///
/// `tail = H(n-1) - H(k-2) = Σ_{i=k-1}^{n-1} 1/i` is updated incrementally as
/// `k` walks down from `n`. `holds(k, tail)` receives the tail exactly (as a
/// fraction) or as a compensated float sum above [`EXACT_HARMONIC_LIMIT`].
fn harmonic_threshold(
    n: usize,
    exact: impl Fn(usize, &BigRational) -> bool,
    float: impl Fn(usize, f64) -> bool,
) -> usize {
    if n <= EXACT_HARMONIC_LIMIT {
        let mut tail = BigRational::zero();
        for k in (2..=n).rev() {
            tail += BigRational::new(BigInt::one(), BigInt::from(k - 1));
            if exact(k, &tail) {
                return k;
            }
        }
    } else {
        let mut tail = CompensatedSum::default();
        for k in (2..=n).rev() {
            tail.add(1.0 / (k - 1) as f64);
            if float(k, tail.value()) {
                return k;
            }
        }
    }
    1
}

fn floor_to_usize(x: &BigRational) -> usize {
    x.floor().to_integer().to_usize().unwrap_or(0)
}

/// The family's threshold from its own closed form or harmonic condition.
pub fn closed_form_threshold(spec: &FamilySpec) -> Result<usize> {
    spec.validate()?;
    let n = spec.n;
    let s = match &spec.kind {
        // n (H(n-1) - H(k-2)) >= 2n - 2k + 3
        FamilyKind::BestChoiceDuration => harmonic_threshold(
            n,
            |k, tail| tail * int(n) >= int(2 * n + 3) - int(2 * k),
            |k, tail| n as f64 * tail >= (2 * n + 3) as f64 - (2 * k) as f64,
        ),
        // H(n-1) - H(k-2) >= 2k - n - 2
        FamilyKind::BestChoiceMinimalDuration => harmonic_threshold(
            n,
            |k, tail| tail + int(n + 2) >= int(2 * k),
            |k, tail| tail + (n + 2) as f64 >= (2 * k) as f64,
        ),
        // floor((3 - 2n + sqrt(1 + 8n^2)) / 2); sqrt may be replaced by isqrt
        FamilyKind::UniformSmallP => {
            let root = (1 + 8 * (n as u128) * (n as u128)).sqrt();
            let s = ((3 + root - 2 * n as u128) / 2) as usize;
            s.clamp(1, n)
        }
        // floor(3 + n - 2/p) when n > 2(1 - p)/p, else 1
        FamilyKind::ConstantP(p) => {
            let two = int(2);
            if int(n) > two.clone() * (BigRational::one() - p) / p {
                floor_to_usize(&(int(n + 3) - two / p))
            } else {
                1
            }
        }
    };
    Ok(s)
}

fn pow<T: Scalar>(base: T, mut exp: u64) -> T {
    let mut result = T::one();
    let mut b = base;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * b.clone();
        }
        b = b.clone() * b;
        exp >>= 1;
    }
    result
}

/// Optimal expected payoff of the constant-p family in closed form.
///
/// With `m = ⌈2/p⌉`: `(1-p)^{m-3} p (m-2)(m-1) / 2` when `n > 2(1-p)/p`,
/// otherwise `n (n+1) (1-p)^{n-1} p / 2`.
pub fn closed_form_value<T: Scalar>(spec: &FamilySpec) -> Result<T> {
    spec.validate()?;
    let FamilyKind::ConstantP(p_exact) = &spec.kind else {
        return Err(Error::UnsupportedFamily(spec.kind.name()));
    };
    let n = spec.n;
    let p = T::from_rational(p_exact);
    let q = T::one() - p.clone();
    let half = T::from_ratio(1, 2);
    let two = int(2);
    if int(n) > two.clone() * (BigRational::one() - p_exact) / p_exact {
        let m = (two / p_exact).ceil().to_integer().to_u64().expect("2/p fits in u64");
        let (a, b) = (T::from_ratio(m as i64 - 2, 1), T::from_ratio(m as i64 - 1, 1));
        Ok(pow(q, m - 3) * p * a * b * half)
    } else {
        let (a, b) = (T::from_ratio(n as i64, 1), T::from_ratio(n as i64 + 1, 1));
        Ok(a * b * pow(q, n as u64 - 1) * p * half)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticRow {
    pub n: usize,
    pub s: usize,
    pub s_over_n: f64,
    pub value: f64,
    pub value_over_n: f64,
}

/// Threshold and value along `grid` (float mode), for comparing against
/// [`FamilyKind::limits`]. Rows come back in grid order.
pub fn asymptotic_report(kind: &FamilyKind, grid: &[usize], cap: usize) -> Result<Vec<AsymptoticRow>> {
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidFamily("grid sizes must be strictly ascending".into()));
    }
    if let Some(&n) = grid.iter().find(|&&n| n > cap) {
        return Err(Error::InstanceTooLarge { n, limit: cap });
    }
    grid.par_iter()
        .map(|&n| {
            let inst = instantiate::<f64>(&kind.with_n(n))?;
            let s = odds_index(&inst);
            let value = odds_value(&inst, s)?;
            Ok(AsymptoticRow {
                n,
                s,
                s_over_n: s as f64 / n as f64,
                value,
                value_over_n: value / n as f64,
            })
        })
        .collect()
}
