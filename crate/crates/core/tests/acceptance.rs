//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use common::*;
use lastsuccess::dp::solve;
use lastsuccess::families::{
    asymptotic_report, closed_form_threshold, closed_form_value, instantiate, FamilyKind,
};
use lastsuccess::monotone::{certify, keep_from_threshold, sign_changes, sufficient_condition};
use lastsuccess::montecarlo::{simulate, simulate_with_workers};
use lastsuccess::oracle::{brute_force_optimal, evaluate_by_paths, evaluate_stop_set};
use lastsuccess::special::{lambert_w0, rumor_constant};
use lastsuccess::{classic_odds, odds, odds_index, validate, BigRational, Certificate};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_time(start: Instant, limit: Duration, what: &str) -> Result<Duration, String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("{what} took {took:?}, limit {limit:?}"))?;
    Ok(took)
}

fn relative_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// Worked example in both numeric modes.
fn criterion_1() -> Outcome {
    let start = Instant::now();
    let sol = solve(&example());
    let took = within_time(start, Duration::from_millis(10), "exact solve")?;
    ensure(sol.expected_profit == q(6721, 2000), || format!("profit {}", sol.expected_profit))?;
    let expected: BTreeSet<usize> = members(&[4, 5, 7, 8, 9]);
    ensure(sol.stopping_set == expected, || format!("set {:?}", sol.stopping_set))?;

    let fsol = solve(&example_f64());
    ensure((fsol.expected_profit - 3.3605).abs() <= 1e-12, || {
        format!("float profit {}", fsol.expected_profit)
    })?;
    ensure(fsol.stopping_set == expected, || format!("float set {:?}", fsol.stopping_set))?;
    Ok(format!("6721/2000, {{4,5,7,8,9}}, exact solve {took:?}"))
}

/// DP against exhaustive search, and the set evaluator against path enumeration.
fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut path_checks = 0;
    for case in 0..200 {
        let inst = build(&random_raw(&mut rng, 12));
        let sol = solve(&inst);
        let best = brute_force_optimal(&inst).map_err(|e| e.to_string())?;
        ensure(sol.expected_profit == best.value, || {
            format!("case {case}: dp {} vs brute {}", sol.expected_profit, best.value)
        })?;
        let attained = evaluate_stop_set(&inst, &sol.stopping_set).unwrap();
        ensure(attained == best.value, || format!("case {case}: dp set attains {attained}"))?;

        if inst.n() <= 10 {
            let mut sets = vec![sol.stopping_set.clone(), best.set.clone(), BTreeSet::new()];
            for _ in 0..3 {
                sets.push((1..=inst.n()).filter(|_| rng.gen_bool(0.5)).collect());
            }
            for set in sets {
                let closed = evaluate_stop_set(&inst, &set).unwrap();
                let paths = evaluate_by_paths(&inst, &set).unwrap();
                ensure(closed == paths, || format!("case {case}: set {set:?} {closed} vs {paths}"))?;
                path_checks += 1;
            }
        }
    }
    let took = within_time(start, Duration::from_secs(60), "oracle equivalence")?;
    Ok(format!("200 instances exact, {path_checks} path-oracle checks, {took:?}"))
}

/// Weighted odds with unit payoffs against the classic odds algorithm.
fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut monotone = 0;
    for case in 0..200 {
        let n = rng.gen_range(1..=30);
        let p: Vec<f64> = (0..n)
            .map(|_| if rng.gen_bool(0.1) { 0.0 } else { rng.gen_range(0.0..0.95) })
            .collect();
        let inst = validate(p.clone(), vec![1.0; n]).unwrap();
        let ext = odds(&inst);
        let classic = classic_odds(&p).map_err(|e| e.to_string())?;
        ensure(ext.s == classic.s, || format!("case {case}: s {} vs {}", ext.s, classic.s))?;
        ensure((ext.value - classic.value).abs() <= 1e-12, || {
            format!("case {case}: value {} vs {}", ext.value, classic.value)
        })?;
        let sol = solve(&inst);
        if certify(&inst, &sol).monotone {
            monotone += 1;
            ensure((ext.value - sol.expected_profit).abs() <= 1e-12, || {
                format!("case {case}: odds {} vs dp {}", ext.value, sol.expected_profit)
            })?;
            ensure(ext.s == sol.threshold(), || format!("case {case}: threshold"))?;
        }
    }
    Ok(format!("200 instances, {monotone} certified monotone and matched the DP"))
}

/// Monotonicity criteria against the DP ground truth.
fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut failures = Vec::new();
    let (mut suffix_count, mut sufficient_count, mut iff_violations) = (0, 0, 0);
    let mut first_violation = None;
    for case in 0..500 {
        let raw = random_raw(&mut rng, 12);
        let inst = build(&raw);
        let sol = solve(&inst);
        let suffix = sol.is_threshold_rule();
        suffix_count += suffix as usize;
        if sufficient_condition(&inst) {
            sufficient_count += 1;
            if !suffix {
                failures.push(format!("case {case}: sufficient condition without suffix set"));
            }
        }
        let changes = sign_changes(&inst);
        if (changes <= 1) != suffix {
            iff_violations += 1;
            first_violation.get_or_insert_with(|| {
                format!("case {case} (n={}, changes={changes}, set={:?})", inst.n(), sol.stopping_set)
            });
        }
        if suffix {
            let rebuilt = keep_from_threshold(&inst, sol.threshold()).unwrap();
            if rebuilt != sol.e_keep {
                failures.push(format!("case {case}: piecewise E_Keep identity"));
            }
        }
    }
    let ex = example();
    let verdict = certify(&ex, &solve(&ex));
    if verdict.monotone || verdict.certificate != (Certificate::NotMonotone { gap: 6, next: 7 }) {
        failures.push(format!("worked example verdict {verdict:?}"));
    }
    if iff_violations > 0 {
        failures.push(format!(
            "sign_changes <= 1 <=> suffix set violated on {iff_violations}/500 instances, first: {}",
            first_violation.unwrap()
        ));
    }
    let summary = format!("{suffix_count}/500 monotone, {sufficient_count} pass the payoff condition");
    if failures.is_empty() {
        Ok(summary)
    } else {
        Err(format!("{summary}; {}", failures.join("; ")))
    }
}

/// Family closed forms against the generic machinery.
fn criterion_5() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    let probs: Vec<BigRational> = (1..=9).map(|k| q(k, 10)).collect();
    for n in 2..=300 {
        let mut kinds = vec![
            FamilyKind::BestChoiceDuration,
            FamilyKind::BestChoiceMinimalDuration,
            FamilyKind::UniformSmallP,
        ];
        kinds.extend(probs.iter().cloned().map(FamilyKind::ConstantP));
        for kind in kinds {
            let spec = kind.with_n(n);
            let inst = instantiate::<BigRational>(&spec).unwrap();
            let s = odds_index(&inst);
            let closed = closed_form_threshold(&spec).unwrap();
            checked += 1;
            if closed != s {
                failures.push(format!("{} n={n}: closed form {closed} vs odds {s}", kind.name()));
            }
        }
    }

    let mut bound_failures = BTreeSet::new();
    for p in &probs {
        let pf = ToPrimitive::to_f64(p).unwrap();
        let ceil_inv = (q(1, 1) / p).ceil().to_integer().to_usize().unwrap();
        for n in 2..=300usize {
            let spec = FamilyKind::ConstantP(p.clone()).with_n(n);
            let inst = instantiate::<f64>(&spec).unwrap();
            let profit = solve(&inst).expected_profit;
            let value = closed_form_value::<f64>(&spec).unwrap();
            if relative_gap(value, profit) > 1e-9 {
                failures.push(format!("constant-p p={p} n={n}: closed value {value} vs dp {profit}"));
            }
            if (n as f64) > 2.0 * (1.0 - pf) / pf {
                let s = odds_index(&inst);
                if s + ceil_inv >= n + 2 {
                    bound_failures.insert(p.to_string());
                }
            }
        }
    }
    if !bound_failures.is_empty() {
        failures.push(format!(
            "bound s < n - ceil(1/p) + 2 fails for p in {{{}}} (s equals the bound)",
            bound_failures.into_iter().collect::<Vec<_>>().join(", ")
        ));
    }
    if failures.is_empty() {
        Ok(format!("{checked} thresholds, 2673 constant-p values within 1e-9, bound holds"))
    } else {
        let shown: Vec<_> = failures.iter().take(5).cloned().collect();
        Err(format!("{checked} thresholds checked; {} failures: {}", failures.len(), shown.join("; ")))
    }
}

/// Convergence toward the limiting constants.
fn criterion_6() -> Outcome {
    let start = Instant::now();
    let grid = [1_000, 10_000, 100_000];
    let theta = 0.203187869;
    let sqrt2m1 = std::f64::consts::SQRT_2 - 1.0;
    let checks: [(FamilyKind, &str, f64, bool); 5] = [
        (FamilyKind::BestChoiceDuration, "duration s/n", theta, true),
        (FamilyKind::BestChoiceMinimalDuration, "minimal-duration s/n", 0.5, true),
        (FamilyKind::BestChoiceMinimalDuration, "minimal-duration E/n", 0.25, false),
        (FamilyKind::UniformSmallP, "uniform-small-p s/n", sqrt2m1, true),
        (FamilyKind::UniformSmallP, "uniform-small-p E/n", 0.230579, false),
    ];
    let mut details = Vec::new();
    for (kind, label, limit, threshold) in checks {
        let rows = asymptotic_report(&kind, &grid, 1_000_000).map_err(|e| e.to_string())?;
        let errors: Vec<f64> = rows
            .iter()
            .map(|r| ((if threshold { r.s_over_n } else { r.value_over_n }) - limit).abs())
            .collect();
        ensure(errors[2] <= 5e-3, || format!("{label}: error {} at n=1e5", errors[2]))?;
        ensure(errors.windows(2).all(|w| w[1] < w[0]), || format!("{label}: errors {errors:?} not decreasing"))?;
        details.push(format!("{label} {:.1e}", errors[2]));
    }
    let took = within_time(start, Duration::from_secs(30), "asymptotic report")?;
    Ok(format!("{} ({took:?})", details.join(", ")))
}

fn criterion_7() -> Outcome {
    let x = rumor_constant();
    let residual = (2.0 - 2.0 * x + x.ln()).abs();
    ensure(residual <= 1e-10, || format!("residual {residual}"))?;
    let digits = format!("{x:.12}");
    ensure(digits.starts_with("0.203187869"), || format!("digits {digits}"))?;
    let via_w = -0.5 * lambert_w0(-2.0 * (-2.0_f64).exp());
    ensure((via_w - x).abs() <= 1e-9, || format!("Lambert W route {via_w} vs {x}"))?;
    Ok(format!("{x:.12}, residual {residual:.1e}, |W route - root| {:.1e}", (via_w - x).abs()))
}

fn criterion_8() -> Outcome {
    let inst = example();
    let set = members(&[4, 5, 7, 8, 9]);
    let exact = 6721.0 / 2000.0;
    let mut outliers = 0;
    for seed in 0..20u64 {
        let r = simulate(&inst, &set, 1_000_000, seed).map_err(|e| e.to_string())?;
        if (r.mean - exact).abs() > 4.0 * r.stderr {
            outliers += 1;
        }
        let again = simulate(&inst, &set, 1_000_000, seed).unwrap();
        ensure(again.mean.to_bits() == r.mean.to_bits() && again.stderr.to_bits() == r.stderr.to_bits(), || {
            format!("seed {seed} not reproducible")
        })?;
    }
    ensure(outliers <= 1, || format!("{outliers} seeds beyond 4 stderr"))?;
    let runs: Vec<_> = [1, 2, 8]
        .iter()
        .map(|&w| simulate_with_workers(&inst, &set, 1_000_000, 123, w).unwrap())
        .collect();
    ensure(runs.windows(2).all(|w| w[0] == w[1]), || format!("worker runs differ: {runs:?}"))?;
    Ok(format!("{outliers}/20 seeds beyond 4 stderr, reruns and 1/2/8 workers bit-identical"))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let c = q(7, 3);
    for case in 0..100 {
        let inst = build(&random_raw(&mut rng, 12));
        let scaled = inst.scale_payoffs(&c).unwrap();
        let (a, b) = (solve(&inst), solve(&scaled));
        ensure(a.stopping_set == b.stopping_set, || format!("case {case}: stopping set changed"))?;
        ensure(odds_index(&inst) == odds_index(&scaled), || format!("case {case}: odds index changed"))?;
        ensure(a.expected_profit.clone() * c.clone() == b.expected_profit, || format!("case {case}: profit"))?;
        ensure(odds(&inst).value * c.clone() == odds(&scaled).value, || format!("case {case}: odds value"))?;
        for k in 0..=inst.n() {
            ensure(a.e_keep[k].clone() * c.clone() == b.e_keep[k], || format!("case {case}: e_keep[{k}]"))?;
            ensure(a.e_stop[k].clone() * c.clone() == b.e_stop[k], || format!("case {case}: e_stop[{k}]"))?;
        }
    }
    Ok("100 instances, sets and indices unchanged, values scaled by exactly 7/3".into())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 worked example", criterion_1),
        ("2 oracle equivalence", criterion_2),
        ("3 classic odds reduction", criterion_3),
        ("4 monotonicity suite", criterion_4),
        ("5 family closed forms", criterion_5),
        ("6 asymptotic constants", criterion_6),
        ("7 rumour's constant", criterion_7),
        ("8 monte carlo", criterion_8),
        ("9 payoff scaling", criterion_9),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
