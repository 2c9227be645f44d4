//! Certifying threshold (monotone) structure of the optimal rule.
//!
//! The myopic continuation value `Ē_Keep(k)` (stop on the next success after
//! `k`) has a closed form, unlike `E_Keep`, and drives the sign-change test.

use serde::{Deserialize, Serialize};

use crate::dp::{e_stop_table, DpSolution};
use crate::error::{check_index, Result};
use crate::instance::ProblemInstance;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// `w_{k+1} >= (1 - p_{k+1}) w_k` for every `k`.
    SufficientPayoffCondition,
    /// `E_Stop - Ē_Keep` changes sign at most once.
    SignChangeAtMostOnce,
    /// The stopping set itself is a suffix.
    DpSuffixCheck,
    /// `gap` is the first index after the threshold that does not stop and
    /// `next` the first stopping index after it.
    NotMonotone { gap: usize, next: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonotonicityVerdict {
    pub monotone: bool,
    pub certificate: Certificate,
}

/// `Ē_Keep(k)` for `k = 0..=n` via
/// `Ē(k) = p_{k+1} E_Stop(k+1) + (1 - p_{k+1}) Ē(k+1)`, `Ē(n) = 0`.
pub fn ebar_keep_table<T: Scalar>(inst: &ProblemInstance<T>) -> Vec<T> {
    let n = inst.n();
    let e_stop = e_stop_table(inst);
    let mut out = vec![T::zero(); n + 1];
    for k in (0..n).rev() {
        let p = inst.p(k + 1).clone();
        out[k] = p.clone() * e_stop[k + 1].clone() + (T::one() - p) * out[k + 1].clone();
    }
    out
}

pub fn ebar_keep<T: Scalar>(inst: &ProblemInstance<T>, k: usize) -> Result<T> {
    check_index(k, 0, inst.n())?;
    Ok(ebar_keep_table(inst).swap_remove(k))
}

pub fn sufficient_condition<T: Scalar>(inst: &ProblemInstance<T>) -> bool {
    (1..inst.n()).all(|k| {
        let q = T::one() - inst.p(k + 1).clone();
        inst.w(k + 1) >= q * inst.w(k)
    })
}

/// Signs of `E_Stop(k) - Ē_Keep(k)` for `k = 1..=n`; `true` means positive.
/// Zero (or below the float tolerance) counts as non-positive.
pub fn difference_signs<T: Scalar>(inst: &ProblemInstance<T>) -> Vec<bool> {
    let e_stop = e_stop_table(inst);
    let ebar = ebar_keep_table(inst);
    (1..=inst.n())
        .map(|k| {
            let d = e_stop[k].clone() - ebar[k].clone();
            d > T::zero() && !d.is_negligible()
        })
        .collect()
}

pub fn sign_changes<T: Scalar>(inst: &ProblemInstance<T>) -> usize {
    difference_signs(inst)
        .windows(2)
        .filter(|pair| pair[0] != pair[1])
        .count()
}

/// Classify the instance, using the DP stopping set as ground truth and
/// reporting the cheapest criterion that confirms it.
pub fn certify<T: Scalar>(inst: &ProblemInstance<T>, sol: &DpSolution<T>) -> MonotonicityVerdict {
    if let Some((gap, next)) = first_gap(sol) {
        return MonotonicityVerdict {
            monotone: false,
            certificate: Certificate::NotMonotone { gap, next },
        };
    }
    let certificate = if sufficient_condition(inst) {
        Certificate::SufficientPayoffCondition
    } else if sign_changes(inst) <= 1 {
        Certificate::SignChangeAtMostOnce
    } else {
        Certificate::DpSuffixCheck
    };
    MonotonicityVerdict {
        monotone: true,
        certificate,
    }
}

fn first_gap<T: Scalar>(sol: &DpSolution<T>) -> Option<(usize, usize)> {
    let first = sol.threshold();
    let gap = (first..=sol.n()).find(|k| !sol.stopping_set.contains(k))?;
    let next = *sol.stopping_set.range(gap..).next()?;
    Some((gap, next))
}

/// `E_Keep` rebuilt from `Ē_Keep` for a threshold rule starting at `threshold`:
/// `Ē_Keep(r)` for `r >= threshold` and `Ē_Keep(threshold - 1)` below it.
pub fn keep_from_threshold<T: Scalar>(inst: &ProblemInstance<T>, threshold: usize) -> Result<Vec<T>> {
    check_index(threshold, 1, inst.n())?;
    let ebar = ebar_keep_table(inst);
    Ok((0..=inst.n())
        .map(|r| {
            if r >= threshold {
                ebar[r].clone()
            } else {
                ebar[threshold - 1].clone()
            }
        })
        .collect())
}
