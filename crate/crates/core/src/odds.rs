//! Weighted odds theorem: the threshold index `s` and its expected payoff.
//!
//! With `w_0 = 0`, `s = max{k : Σ_{j=k}^{n} w_j p_j / (1 - p_j) >= w_{k-1}}`.
//! For monotone problems, stopping on the first success at or after `s` is
//! optimal. The unweighted case (`w ≡ 1`) is the classic odds algorithm.

use crate::error::{check_index, Error, Result};
use crate::instance::ProblemInstance;
use crate::scalar::{ExtendedReal, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct OddsResult<T> {
    pub s: usize,
    /// True iff `p_s = 1`.
    pub degenerate: bool,
    pub value: T,
}

/// Threshold index `s`, found in one backward pass over the weighted odds.
///
/// A trial with `p_j = 1` contributes `+∞`, so `s` is never below it.
pub fn odds_index<T: Scalar>(inst: &ProblemInstance<T>) -> usize {
    let mut suffix = ExtendedReal::Finite(T::zero());
    for k in (1..=inst.n()).rev() {
        suffix = suffix + inst.odds_ratio(k).scale(&inst.w(k));
        if suffix.at_least(&inst.w(k - 1)) {
            return k;
        }
    }
    unreachable!("k = 1 always qualifies since w_0 = 0")
}

/// Expected payoff of stopping on the first success among trials `s..=n`.
///
/// For `p_s < 1` and no certain trial after `s` this is
/// `∏_{j=s}^{n}(1 - p_j) · Σ_{i=s}^{n} w_i p_i / (1 - p_i)`; when `p_s = 1`
/// it is `w_s ∏_{j=s+1}^{n}(1 - p_j)`. If some later trial `J > s` is certain,
/// play always reaches at most `J` and the payoff is
/// `∏_{j=s}^{J-1}(1 - p_j) · w_J ∏_{j=J+1}^{n}(1 - p_j)`.
pub fn odds_value<T: Scalar>(inst: &ProblemInstance<T>, s: usize) -> Result<T> {
    let n = inst.n();
    check_index(s, 1, n)?;
    let last_certain = (s..=n).rev().find(|&k| inst.p(k).is_one());
    let value = match last_certain {
        Some(j) => inst.survival(s, j - 1) * inst.w(j) * inst.survival(j + 1, n),
        None => {
            let sum = (s..=n).fold(T::zero(), |acc, i| {
                let p = inst.p(i).clone();
                acc + inst.w(i) * p.clone() / (T::one() - p)
            });
            inst.survival(s, n) * sum
        }
    };
    Ok(value)
}

/// Index and value together.
pub fn odds<T: Scalar>(inst: &ProblemInstance<T>) -> OddsResult<T> {
    let s = odds_index(inst);
    let value = odds_value(inst, s).expect("odds_index is in range");
    OddsResult {
        s,
        degenerate: inst.p(s).is_one(),
        value,
    }
}

/// Classic odds algorithm for win probability (all payoffs equal to one).
///
/// `s` is the largest `k` whose suffix odds sum reaches 1, or 1 if the total
/// odds sum is below 1. The value is `(∏_{j>=s} q_j)(Σ_{i>=s} r_i)`.
pub fn classic_odds<T: Scalar>(p: &[T]) -> Result<OddsResult<T>> {
    if p.is_empty() {
        return Err(Error::EmptyInstance);
    }
    for (i, pk) in p.iter().enumerate() {
        if !(pk.is_finite() && *pk >= T::zero() && *pk <= T::one()) {
            return Err(Error::ProbabilityOutOfRange {
                index: i + 1,
                value: pk.to_string(),
            });
        }
        if pk.is_one() {
            return Err(Error::DegenerateProbability { index: i + 1 });
        }
    }
    let r: Vec<T> = p
        .iter()
        .map(|pk| pk.clone() / (T::one() - pk.clone()))
        .collect();

    let mut s = 1;
    let mut suffix = T::zero();
    for k in (1..=p.len()).rev() {
        suffix = suffix + r[k - 1].clone();
        if suffix >= T::one() {
            s = k;
            break;
        }
    }
    let q_prod = p[s - 1..]
        .iter()
        .fold(T::one(), |acc, pk| acc * (T::one() - pk.clone()));
    let r_sum = r[s - 1..].iter().fold(T::zero(), |acc, x| acc + x.clone());
    Ok(OddsResult {
        s,
        degenerate: false,
        value: q_prod * r_sum,
    })
}
