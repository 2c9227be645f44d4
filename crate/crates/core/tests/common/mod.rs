#![allow(dead_code)]

use lastsuccess::{validate, BigRational, ProblemInstance};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::Rng;

pub fn q(n: i64, d: u64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn example() -> ProblemInstance<BigRational> {
    let p = [6, 10, 12, 3, 12, 10, 5, 10, 12].iter().map(|&d| q(1, d)).collect();
    let w = [7, 4, 9, 10, 6, 3, 9, 9, 1].iter().map(|&x| q(x, 1)).collect();
    validate(p, w).unwrap()
}

pub fn example_f64() -> ProblemInstance<f64> {
    let p = [6.0, 10.0, 12.0, 3.0, 12.0, 10.0, 5.0, 10.0, 12.0].iter().map(|d| 1.0 / d).collect();
    let w = vec![7.0, 4.0, 9.0, 10.0, 6.0, 3.0, 9.0, 9.0, 1.0];
    validate(p, w).unwrap()
}

/// Fractions `(num, den)` for a probability and a payoff.
pub type RawTrial = ((i64, u64), (i64, u64));

pub fn build(trials: &[RawTrial]) -> ProblemInstance<BigRational> {
    let p = trials.iter().map(|&((a, b), _)| q(a, b)).collect();
    let w = trials.iter().map(|&(_, (c, d))| q(c, d)).collect();
    validate(p, w).unwrap()
}

pub fn to_float(inst: &ProblemInstance<BigRational>) -> ProblemInstance<f64> {
    use lastsuccess::Scalar;
    validate(
        inst.probabilities().iter().map(Scalar::to_f64).collect(),
        inst.payoffs().iter().map(Scalar::to_f64).collect(),
    )
    .unwrap()
}

pub fn trial_strategy() -> impl Strategy<Value = RawTrial> {
    let p = (1u64..=12).prop_flat_map(|den| (0..=den as i64, Just(den)));
    let w = (1i64..=20, 1u64..=4);
    (p, w)
}

pub fn instance_strategy(max_n: usize) -> impl Strategy<Value = Vec<RawTrial>> {
    prop::collection::vec(trial_strategy(), 1..=max_n)
}

/// Fraction-valued random instance from a seeded generator.
pub fn random_raw(rng: &mut impl Rng, max_n: usize) -> Vec<RawTrial> {
    let n = rng.gen_range(1..=max_n);
    (0..n)
        .map(|_| {
            let den = rng.gen_range(1..=12u64);
            let num = rng.gen_range(0..=den as i64);
            let w = (rng.gen_range(1..=20i64), rng.gen_range(1..=4u64));
            ((num, den), w)
        })
        .collect()
}

pub fn members(xs: &[usize]) -> std::collections::BTreeSet<usize> {
    xs.iter().copied().collect()
}
