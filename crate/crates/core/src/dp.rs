//! Backward induction for the optimal stopping rule.

use std::collections::BTreeSet;

use crate::error::{check_index, Result};
use crate::instance::ProblemInstance;
use crate::scalar::Scalar;

/// Value functions and the optimal rule for one instance.
///
/// `e_stop[k]` is stored for `k = 1..=n` (slot 0 is unused and zero);
/// `e_keep[k]` for `k = 0..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct DpSolution<T> {
    pub e_stop: Vec<T>,
    pub e_keep: Vec<T>,
    pub stopping_set: BTreeSet<usize>,
    pub expected_profit: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Stop,
    Continue,
}

/// Expected payoff of stopping on a success at trial `k`:
/// `w_k` times the probability that no later trial succeeds.
pub fn e_stop<T: Scalar>(inst: &ProblemInstance<T>, k: usize) -> Result<T> {
    check_index(k, 1, inst.n())?;
    Ok(inst.w(k) * inst.survival(k + 1, inst.n()))
}

pub(crate) fn e_stop_table<T: Scalar>(inst: &ProblemInstance<T>) -> Vec<T> {
    let n = inst.n();
    let mut out = Vec::with_capacity(n + 1);
    out.push(T::zero());
    out.extend((1..=n).map(|k| inst.w(k) * inst.survival(k + 1, n)));
    out
}

/// Solve the instance by backward induction.
///
/// `E_Keep(n) = 0` and
/// `E_Keep(k) = p_{k+1} max(E_Stop(k+1), E_Keep(k+1)) + (1 - p_{k+1}) E_Keep(k+1)`.
/// Trial `k` belongs to the stopping set iff `E_Stop(k) > E_Keep(k)`; ties continue.
pub fn solve<T: Scalar>(inst: &ProblemInstance<T>) -> DpSolution<T> {
    let n = inst.n();
    let e_stop = e_stop_table(inst);
    let mut e_keep = vec![T::zero(); n + 1];
    for k in (0..n).rev() {
        let p = inst.p(k + 1).clone();
        let next = e_keep[k + 1].clone();
        let best = T::max_of(e_stop[k + 1].clone(), next.clone());
        e_keep[k] = p.clone() * best + (T::one() - p) * next;
    }
    let stopping_set = (1..=n).filter(|&k| e_stop[k].exceeds(&e_keep[k])).collect();
    let expected_profit = e_keep[0].clone();
    DpSolution {
        e_stop,
        e_keep,
        stopping_set,
        expected_profit,
    }
}

impl<T: Scalar> DpSolution<T> {
    pub fn n(&self) -> usize {
        self.e_keep.len() - 1
    }

    /// First index of the stopping set. Never empty: trial `n` always stops.
    pub fn threshold(&self) -> usize {
        *self.stopping_set.iter().next().expect("trial n always stops")
    }

    /// True when the stopping set is `{k : k >= threshold}`.
    pub fn is_threshold_rule(&self) -> bool {
        let first = self.threshold();
        self.stopping_set.len() == self.n() - first + 1
    }

    /// Optimal action after observing trial `k`.
    pub fn advise(&self, k: usize, observed_success: bool) -> Result<Decision> {
        check_index(k, 1, self.n())?;
        Ok(if observed_success && self.stopping_set.contains(&k) {
            Decision::Stop
        } else {
            Decision::Continue
        })
    }
}
