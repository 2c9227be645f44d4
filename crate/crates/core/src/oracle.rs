//! Exhaustive ground truth for small instances.
//!
//! Two layers that share no code with the solvers: a closed-form evaluator
//! for a fixed stopping set, and raw enumeration of all `2^n` outcome paths.
//! The brute-force optimum searches every stopping set with the first.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::instance::ProblemInstance;
use crate::scalar::Scalar;

/// Largest `n` accepted by the `2^n` enumerations.
pub const MAX_ENUMERATION_N: usize = 22;

#[derive(Debug, Clone, PartialEq)]
pub struct StopSetEvaluation<T> {
    pub set: BTreeSet<usize>,
    pub value: T,
}

fn check_members(n: usize, set: &BTreeSet<usize>) -> Result<()> {
    match set.iter().find(|&&k| k == 0 || k > n) {
        Some(&index) => Err(Error::IndexOutOfRange { index, lo: 1, hi: n }),
        None => Ok(()),
    }
}

fn check_size(n: usize) -> Result<()> {
    if n > MAX_ENUMERATION_N {
        return Err(Error::InstanceTooLarge {
            n,
            limit: MAX_ENUMERATION_N,
        });
    }
    Ok(())
}

/// `gain[k] = p_k w_k ∏_{i>k}(1 - p_i)` for `k = 1..=n`, slot 0 unused.
fn stop_gains<T: Scalar>(inst: &ProblemInstance<T>) -> Vec<T> {
    let n = inst.n();
    let mut gains = vec![T::zero(); n + 1];
    let mut tail = T::one();
    for k in (1..=n).rev() {
        gains[k] = inst.p(k).clone() * inst.w(k) * tail.clone();
        tail = tail * (T::one() - inst.p(k).clone());
    }
    gains
}

fn evaluate_with<T: Scalar>(
    inst: &ProblemInstance<T>,
    gains: &[T],
    members: impl Iterator<Item = usize>,
) -> T {
    let mut reach = T::one();
    let mut value = T::zero();
    for k in members {
        value = value + reach.clone() * gains[k].clone();
        reach = reach * (T::one() - inst.p(k).clone());
    }
    value
}

fn mask_members(mask: u32, n: usize) -> impl Iterator<Item = usize> {
    (1..=n).filter(move |k| mask & (1 << (k - 1)) != 0)
}

/// Exact expected payoff of "stop at the first success whose index is in `set`".
pub fn evaluate_stop_set<T: Scalar>(inst: &ProblemInstance<T>, set: &BTreeSet<usize>) -> Result<T> {
    check_members(inst.n(), set)?;
    let gains = stop_gains(inst);
    Ok(evaluate_with(inst, &gains, set.iter().copied()))
}

/// Same expectation by summing probability × payoff over every outcome path.
pub fn evaluate_by_paths<T: Scalar>(inst: &ProblemInstance<T>, set: &BTreeSet<usize>) -> Result<T> {
    let n = inst.n();
    check_members(n, set)?;
    check_size(n)?;
    let mut total = T::zero();
    for outcome in 0u32..(1u32 << n) {
        let success = |k: usize| outcome & (1 << (k - 1)) != 0;
        let stop_at = (1..=n).find(|&k| success(k) && set.contains(&k));
        let Some(k) = stop_at else { continue };
        if (k + 1..=n).any(success) {
            continue;
        }
        let prob = (1..=n).fold(T::one(), |acc, j| {
            let p = inst.p(j).clone();
            acc * if success(j) { p } else { T::one() - p }
        });
        total = total + prob * inst.w(k);
    }
    Ok(total)
}

// Lexicographic order of the sorted member lists.
fn lex_cmp(a: u32, b: u32, n: usize) -> Ordering {
    let mut xs = mask_members(a, n);
    let mut ys = mask_members(b, n);
    loop {
        match (xs.next(), ys.next()) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(x), Some(y)) if x != y => return x.cmp(&y),
            _ => {}
        }
    }
}

/// Best stopping set over all `2^n` subsets. Ties go to the lexicographically
/// smallest member list, so the answer is independent of evaluation order.
pub fn brute_force_optimal<T: Scalar>(inst: &ProblemInstance<T>) -> Result<StopSetEvaluation<T>> {
    let n = inst.n();
    check_size(n)?;
    let gains = stop_gains(inst);
    let better = |a: (T, u32), b: (T, u32)| -> (T, u32) {
        if b.0 > a.0 || (b.0 == a.0 && lex_cmp(b.1, a.1, n) == Ordering::Less) {
            b
        } else {
            a
        }
    };
    let (value, mask) = (0u32..(1u32 << n))
        .into_par_iter()
        .map(|mask| (evaluate_with(inst, &gains, mask_members(mask, n)), mask))
        .reduce(|| (T::zero(), 0), better);
    Ok(StopSetEvaluation {
        set: mask_members(mask, n).collect(),
        value,
    })
}
