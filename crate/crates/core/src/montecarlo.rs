//! Seeded Monte Carlo evaluation of stopping-set strategies.
//!
//! Every uniform draw is a pure function of `(seed, trial, k)`, so a run can
//! be split across any number of workers without changing a single bit of
//! the result. Workers only count wins per stopping index; the mean and
//! variance are formed from those integer counts afterwards.

use std::collections::BTreeSet;
use std::thread;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::ProblemInstance;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationResult {
    pub mean: f64,
    /// Unbiased sample standard deviation over `sqrt(trials)`; zero for one trial.
    pub stderr: f64,
    pub trials: u64,
    pub seed: u64,
}

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Counter-based uniform in `[0, 1)` keyed by `(seed, trial, k)`.
#[inline]
pub fn uniform(seed: u64, trial: u64, k: u64) -> f64 {
    let h = mix64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let h = mix64(h ^ trial.wrapping_mul(0xd1b5_4a32_d192_ed03));
    let h = mix64(h ^ k.wrapping_mul(0x8cb9_2ba7_2f3d_8dd7));
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

struct Plan {
    p: Vec<f64>,
    members: Vec<usize>,
}

impl Plan {
    /// Index that pays on this trial, if any.
    fn play(&self, seed: u64, trial: u64) -> Option<usize> {
        let success = |k: usize| uniform(seed, trial, k as u64) < self.p[k - 1];
        let k = *self.members.iter().find(|&&k| success(k))?;
        if (k + 1..=self.p.len()).any(success) {
            None
        } else {
            Some(k)
        }
    }

    fn count_wins(&self, seed: u64, trials: std::ops::Range<u64>) -> Vec<u64> {
        let mut wins = vec![0u64; self.p.len() + 1];
        for t in trials {
            if let Some(k) = self.play(seed, t) {
                wins[k] += 1;
            }
        }
        wins
    }
}

/// Simulate on all available cores.
pub fn simulate<T: Scalar>(
    inst: &ProblemInstance<T>,
    set: &BTreeSet<usize>,
    trials: u64,
    seed: u64,
) -> Result<SimulationResult> {
    let workers = thread::available_parallelism().map_or(1, |n| n.get());
    simulate_with_workers(inst, set, trials, seed, workers)
}

/// Simulate with trials `0..trials` split into `workers` contiguous chunks.
/// Trial `t` always uses the stream `(seed, t, ·)`, whichever chunk runs it.
pub fn simulate_with_workers<T: Scalar>(
    inst: &ProblemInstance<T>,
    set: &BTreeSet<usize>,
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<SimulationResult> {
    let n = inst.n();
    if let Some(&index) = set.iter().find(|&&k| k == 0 || k > n) {
        return Err(Error::IndexOutOfRange { index, lo: 1, hi: n });
    }
    if trials == 0 {
        return Err(Error::ZeroTrials);
    }
    let plan = Plan {
        p: inst.probabilities().iter().map(Scalar::to_f64).collect(),
        members: set.iter().copied().collect(),
    };
    let workers = (workers.max(1) as u64).min(trials);

    let wins = if workers == 1 {
        plan.count_wins(seed, 0..trials)
    } else {
        let plan = &plan;
        thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|c| {
                    let lo = trials * c / workers;
                    let hi = trials * (c + 1) / workers;
                    scope.spawn(move || plan.count_wins(seed, lo..hi))
                })
                .collect();
            let mut total = vec![0u64; n + 1];
            for h in handles {
                for (acc, x) in total.iter_mut().zip(h.join().expect("worker panicked")) {
                    *acc += x;
                }
            }
            total
        })
    };

    let w: Vec<f64> = (0..=n).map(|k| inst.w(k).to_f64()).collect();
    let tf = trials as f64;
    let mean = (1..=n).map(|k| wins[k] as f64 * w[k]).sum::<f64>() / tf;
    let losses = trials - wins.iter().sum::<u64>();
    let stderr = if trials > 1 {
        let ss = (1..=n)
            .map(|k| wins[k] as f64 * (w[k] - mean).powi(2))
            .sum::<f64>()
            + losses as f64 * mean * mean;
        (ss / (tf - 1.0)).sqrt() / tf.sqrt()
    } else {
        0.0
    };
    Ok(SimulationResult {
        mean,
        stderr,
        trials,
        seed,
    })
}
