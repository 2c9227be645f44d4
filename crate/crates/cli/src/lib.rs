//! Command-line surface for the `lastsuccess` solver.
//!
//! [`run`] takes the argument vector and explicit stdin/stdout/stderr handles
//! and returns the process exit status: 0 on success, 2 for input errors and
//! usage problems, 3 when an internal size limit is hit.

pub mod advise;
pub mod report;

use std::collections::BTreeSet;
use std::io::{BufRead, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lastsuccess::families::{self, FamilyKind, FamilySpec, DEFAULT_SIZE_CAP};
use lastsuccess::monotone::{sign_changes, sufficient_condition};
use lastsuccess::montecarlo::{simulate, simulate_with_workers};
use lastsuccess::oracle::{brute_force_optimal, evaluate_stop_set};
use lastsuccess::scalar::parse_fraction;
use lastsuccess::{
    certify, odds, solve, BigRational, Entry, Error, InstanceFile, NumericMode, ProblemInstance, Scalar,
};
use serde_json::{json, Value};

use crate::advise::AdviseSession;
use crate::report::{digest_text, instance_digest, RunReport, TOOL_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "lastsuccess", version, about = "Optimal stopping on the last success")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Optimal rule and expected profit by backward induction.
    Solve(InstanceArgs),
    /// Weighted odds threshold and its value.
    Odds(InstanceArgs),
    /// Decide whether the optimal rule is a threshold rule.
    Monotone(InstanceArgs),
    /// Exhaustive search over every stopping set (n <= 22).
    Oracle(InstanceArgs),
    /// Monte Carlo estimate for a stopping set.
    Simulate(SimulateArgs),
    /// Closed forms and limits for the built-in families.
    Family(FamilyArgs),
    /// Read outcomes (0/1) from stdin and say when to stop.
    Advise(InstanceArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

#[derive(Debug, Clone, Copy, Default, ValueEnum)]
enum FormatArg {
    #[default]
    Table,
    Json,
}

#[derive(Debug, Args)]
struct InstanceArgs {
    /// Instance JSON ({"p": [...], "w": [...]}) or a JSON report.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Comma-separated probabilities.
    #[arg(long, allow_hyphen_values = true)]
    p: Option<String>,
    /// Comma-separated payoffs.
    #[arg(long, allow_hyphen_values = true)]
    w: Option<String>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long, value_enum, default_value_t)]
    format: FormatArg,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Stopping set, e.g. 4,5,7,8,9 (default: the optimal set).
    #[arg(long)]
    set: Option<String>,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Debug, Args)]
struct FamilyArgs {
    /// duration | minimal-duration | uniform-small-p | constant-p
    #[arg(long)]
    name: String,
    #[arg(long)]
    n: Option<usize>,
    /// Success probability for constant-p, as a fraction or decimal.
    #[arg(long)]
    prob: Option<String>,
    /// Comma-separated ascending sizes for a convergence table.
    #[arg(long)]
    grid: Option<String>,
    #[arg(long, default_value_t = DEFAULT_SIZE_CAP)]
    cap: usize,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long, value_enum, default_value_t)]
    format: FormatArg,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InstanceTooLarge { .. } => EXIT_LIMIT,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

/// Run one command line. `args[0]` is the program name.
pub fn run<I, S>(args: I, stdin: &mut dyn BufRead, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let result = match cli.command {
        Command::Advise(args) => advise_command(&args, stdin, stdout),
        command => dispatch(command).map(|text| {
            let _ = stdout.write_all(text.as_bytes());
        }),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command) -> Result<String, Failure> {
    let (report, format) = match command {
        Command::Solve(a) => (instance_report("solve", &a, |i| Ok(solve_results(i)))?, a.format),
        Command::Odds(a) => (instance_report("odds", &a, |i| Ok(odds_results(i)))?, a.format),
        Command::Monotone(a) => (instance_report("monotone", &a, |i| Ok(monotone_results(i)))?, a.format),
        Command::Oracle(a) => (instance_report("oracle", &a, oracle_results)?, a.format),
        Command::Simulate(a) => {
            let set = a.set.as_deref().map(parse_set).transpose()?;
            let report = instance_report("simulate", &a.instance, |i| {
                simulate_results(i, set.clone(), a.trials, a.seed, a.workers)
            })?;
            (report, a.instance.format)
        }
        Command::Family(a) => (family_report(&a)?, a.format),
        Command::Advise(_) => unreachable!("handled by advise_command"),
    };
    Ok(render(&report, format))
}

fn render(report: &RunReport, format: FormatArg) -> String {
    match format {
        FormatArg::Table => report.to_table(),
        FormatArg::Json => report.to_json() + "\n",
    }
}

fn parse_list(text: &str) -> Result<Vec<Entry>, Failure> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| Entry::parse(s).map_err(Failure::from))
        .collect()
}

fn parse_set(text: &str) -> Result<BTreeSet<usize>, Failure> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| input_error(format!("invalid set member `{s}`")))
        })
        .collect()
}

fn load_instance(args: &InstanceArgs) -> Result<InstanceFile, Failure> {
    match (&args.input, &args.p, &args.w) {
        (Some(path), None, None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))?;
            read_instance_text(&text)
        }
        (None, Some(p), Some(w)) => Ok(InstanceFile {
            p: parse_list(p)?,
            w: parse_list(w)?,
        }),
        (Some(_), _, _) => Err(input_error("use either --input or --p/--w, not both")),
        _ => Err(input_error("an instance is required: --input FILE or --p ... --w ...")),
    }
}

/// Accepts an instance document or a JSON report that embeds one.
fn read_instance_text(text: &str) -> Result<InstanceFile, Failure> {
    let value: Value = serde_json::from_str(text).map_err(|e| input_error(format!("invalid JSON: {e}")))?;
    let doc = match value.get("instance") {
        Some(inner) if value.get("command").is_some() => inner.clone(),
        _ => value,
    };
    serde_json::from_value(doc).map_err(|e| input_error(format!("invalid instance: {e}")))
}

fn choose_mode(file: &InstanceFile, requested: Option<ModeArg>) -> Result<NumericMode, Failure> {
    match requested {
        None => Ok(file.natural_mode()),
        Some(ModeArg::Float) => Ok(NumericMode::Float),
        Some(ModeArg::Exact) if file.natural_mode() == NumericMode::ExactRational => Ok(NumericMode::ExactRational),
        Some(ModeArg::Exact) => Err(input_error("exact mode needs every entry as an integer or a/b fraction")),
    }
}

/// Object-safe view used to run generic solver code from a closure.
trait AnyInstance {
    fn with_exact(&self) -> Option<&ProblemInstance<BigRational>>;
    fn with_float(&self) -> Option<&ProblemInstance<f64>>;
}

struct Typed<'a, T>(&'a ProblemInstance<T>);

impl<T: Scalar> AnyInstance for Typed<'_, T> {
    fn with_exact(&self) -> Option<&ProblemInstance<BigRational>> {
        (self.0 as &dyn std::any::Any).downcast_ref()
    }

    fn with_float(&self) -> Option<&ProblemInstance<f64>> {
        (self.0 as &dyn std::any::Any).downcast_ref()
    }
}

/// Apply a generic function to whichever concrete instance is inside.
macro_rules! generic_call {
    ($inst:expr, $f:expr) => {
        match ($inst.with_exact(), $inst.with_float()) {
            (Some(i), _) => $f(i),
            (_, Some(i)) => $f(i),
            _ => unreachable!("instances are exact or float"),
        }
    };
}

fn solve_results(inst: &dyn AnyInstance) -> Value {
    generic_call!(inst, solve_json)
}

fn odds_results(inst: &dyn AnyInstance) -> Value {
    generic_call!(inst, odds_json)
}

fn monotone_results(inst: &dyn AnyInstance) -> Value {
    generic_call!(inst, monotone_json)
}

fn oracle_results(inst: &dyn AnyInstance) -> Result<Value, Failure> {
    generic_call!(inst, oracle_json)
}

fn simulate_results(
    inst: &dyn AnyInstance,
    set: Option<BTreeSet<usize>>,
    trials: u64,
    seed: u64,
    workers: Option<usize>,
) -> Result<Value, Failure> {
    generic_call!(inst, |i| simulate_json(i, set.clone(), trials, seed, workers))
}

fn values<T: Scalar>(xs: &[T]) -> Value {
    Value::Array(xs.iter().map(Scalar::to_json).collect())
}

fn solve_json<T: Scalar>(inst: &ProblemInstance<T>) -> Value {
    let sol = solve(inst);
    json!({
        "expected_profit": sol.expected_profit.to_json(),
        "stopping_set": sol.stopping_set,
        "threshold_rule": sol.is_threshold_rule(),
        "e_stop": values(&sol.e_stop[1..]),
        "e_keep": values(&sol.e_keep),
    })
}

fn odds_json<T: Scalar>(inst: &ProblemInstance<T>) -> Value {
    let r = odds(inst);
    json!({
        "s": r.s,
        "degenerate": r.degenerate,
        "value": r.value.to_json(),
    })
}

fn monotone_json<T: Scalar>(inst: &ProblemInstance<T>) -> Value {
    let sol = solve(inst);
    let verdict = certify(inst, &sol);
    json!({
        "monotone": verdict.monotone,
        "certificate": verdict.certificate,
        "sufficient_condition": sufficient_condition(inst),
        "sign_changes": sign_changes(inst),
        "stopping_set": sol.stopping_set,
    })
}

fn oracle_json<T: Scalar>(inst: &ProblemInstance<T>) -> Result<Value, Failure> {
    let best = brute_force_optimal(inst)?;
    let sol = solve(inst);
    Ok(json!({
        "set": best.set,
        "value": best.value.to_json(),
        "dp_expected_profit": sol.expected_profit.to_json(),
        "agrees": best.value == sol.expected_profit,
    }))
}

fn simulate_json<T: Scalar>(
    inst: &ProblemInstance<T>,
    set: Option<BTreeSet<usize>>,
    trials: u64,
    seed: u64,
    workers: Option<usize>,
) -> Result<Value, Failure> {
    let set = set.unwrap_or_else(|| solve(inst).stopping_set);
    let exact = evaluate_stop_set(inst, &set)?;
    let r = match workers {
        Some(w) => simulate_with_workers(inst, &set, trials, seed, w)?,
        None => simulate(inst, &set, trials, seed)?,
    };
    Ok(json!({
        "set": set,
        "mean": r.mean,
        "stderr": r.stderr,
        "trials": r.trials,
        "seed": r.seed,
        "exact_value": exact.to_json(),
    }))
}

fn instance_report(
    command: &str,
    args: &InstanceArgs,
    payload: impl Fn(&dyn AnyInstance) -> Result<Value, Failure>,
) -> Result<RunReport, Failure> {
    let file = load_instance(args)?;
    let mode = choose_mode(&file, args.mode)?;
    let (results, canonical) = match mode {
        NumericMode::ExactRational => {
            let inst = file.build::<BigRational>()?;
            (payload(&Typed(&inst))?, InstanceFile::from_instance(&inst))
        }
        NumericMode::Float => {
            let inst = file.build::<f64>()?;
            (payload(&Typed(&inst))?, InstanceFile::from_instance(&inst))
        }
    };
    Ok(RunReport {
        command: command.to_string(),
        instance_digest: instance_digest(&canonical),
        mode,
        results,
        version: TOOL_VERSION.to_string(),
        instance: Some(canonical),
    })
}

/// Parse a family probability exactly; decimals such as `0.1` become `1/10`.
fn parse_probability(text: &str) -> Result<BigRational, Failure> {
    if let Some(r) = parse_fraction(text) {
        return Ok(r);
    }
    let t = text.trim();
    let (int_part, frac_part) = t.split_once('.').unwrap_or((t, ""));
    let digits = format!("{int_part}{frac_part}");
    let scale = format!("1{}", "0".repeat(frac_part.len()));
    parse_fraction(&format!("{digits}/{scale}"))
        .filter(|_| !t.is_empty() && t.chars().all(|c| c.is_ascii_digit() || c == '.'))
        .ok_or_else(|| input_error(format!("cannot parse probability `{text}`")))
}

fn family_report(args: &FamilyArgs) -> Result<RunReport, Failure> {
    let prob = args.prob.as_deref().map(parse_probability).transpose()?;
    let kind = FamilyKind::from_name(&args.name, prob.clone())?;
    let params = format!(
        "{}:{}:{}",
        kind.name(),
        args.n.map_or("-".into(), |n| n.to_string()),
        prob.as_ref().map_or("-".into(), |p| p.to_string())
    );

    if let Some(grid) = &args.grid {
        let grid: Vec<usize> = grid
            .split(',')
            .map(|s| s.trim().parse().map_err(|_| input_error(format!("invalid grid size `{s}`"))))
            .collect::<Result<_, _>>()?;
        let rows = families::asymptotic_report(&kind, &grid, args.cap)?;
        let (s_limit, value_limit) = kind.limits();
        return Ok(RunReport {
            command: "family".into(),
            instance_digest: digest_text(&format!("{params}:{grid:?}")),
            mode: NumericMode::Float,
            results: json!({
                "family": kind.name(),
                "limit_s_over_n": s_limit,
                "limit_value_over_n": value_limit,
                "rows": rows,
            }),
            version: TOOL_VERSION.into(),
            instance: None,
        });
    }

    let n = args.n.ok_or_else(|| input_error("family needs --n or --grid"))?;
    if n > args.cap {
        return Err(Error::InstanceTooLarge { n, limit: args.cap }.into());
    }
    let spec = kind.with_n(n);
    let mode = match args.mode {
        Some(ModeArg::Float) => NumericMode::Float,
        _ => NumericMode::ExactRational,
    };
    let (results, canonical) = match mode {
        NumericMode::ExactRational => family_json::<BigRational>(&spec)?,
        NumericMode::Float => family_json::<f64>(&spec)?,
    };
    Ok(RunReport {
        command: "family".into(),
        instance_digest: instance_digest(&canonical),
        mode,
        results,
        version: TOOL_VERSION.into(),
        instance: Some(canonical),
    })
}

fn family_json<T: Scalar>(spec: &FamilySpec) -> Result<(Value, InstanceFile), Failure> {
    let inst = families::instantiate::<T>(spec)?;
    let r = odds(&inst);
    let sol = solve(&inst);
    let verdict = certify(&inst, &sol);
    let closed_value = match families::closed_form_value::<T>(spec) {
        Ok(v) => v.to_json(),
        Err(Error::UnsupportedFamily(_)) => Value::Null,
        Err(e) => return Err(e.into()),
    };
    let value = json!({
        "family": spec.kind.name(),
        "n": spec.n,
        "s": families::closed_form_threshold(spec)?,
        "odds_s": r.s,
        "E": closed_value,
        "odds_value": r.value.to_json(),
        "expected_profit": sol.expected_profit.to_json(),
        "monotone": verdict.monotone,
        "certificate": verdict.certificate,
    });
    Ok((value, InstanceFile::from_instance(&inst)))
}

fn advise_command(args: &InstanceArgs, stdin: &mut dyn BufRead, stdout: &mut dyn Write) -> Result<(), Failure> {
    let file = load_instance(args)?;
    match choose_mode(&file, args.mode)? {
        NumericMode::ExactRational => advise_loop(&file.build::<BigRational>()?, args.format, stdin, stdout),
        NumericMode::Float => advise_loop(&file.build::<f64>()?, args.format, stdin, stdout),
    }
}

fn advise_loop<T: Scalar>(
    inst: &ProblemInstance<T>,
    format: FormatArg,
    stdin: &mut dyn BufRead,
    stdout: &mut dyn Write,
) -> Result<(), Failure> {
    let sol = solve(inst);
    let mut session = AdviseSession::new(&sol);
    let mut lines = Vec::new();
    let mut buf = String::new();
    while !session.is_finished() {
        buf.clear();
        match stdin.read_line(&mut buf) {
            Ok(0) => break,
            Ok(_) => {}
            Err(e) => return Err(input_error(format!("cannot read outcomes: {e}"))),
        }
        for token in buf.split_whitespace() {
            for step in session.feed(token) {
                let line = step.line();
                if let FormatArg::Table = format {
                    let _ = writeln!(stdout, "{line}");
                    let _ = stdout.flush();
                }
                lines.push(line);
            }
            if session.is_finished() {
                break;
            }
        }
    }
    if let FormatArg::Json = format {
        let canonical = InstanceFile::from_instance(inst);
        let report = RunReport {
            command: "advise".into(),
            instance_digest: instance_digest(&canonical),
            mode: T::MODE,
            results: json!({ "transcript": lines }),
            version: TOOL_VERSION.into(),
            instance: Some(canonical),
        };
        let _ = stdout.write_all((report.to_json() + "\n").as_bytes());
    }
    Ok(())
}
