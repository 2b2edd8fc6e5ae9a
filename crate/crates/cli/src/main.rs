//! `randfib`: exact sign-tree statistics, growth bounds, β-case audits and
//! Monte Carlo growth estimates for `x[n+1] = x[n-1] ± β·x[n]`.
//!
//! Exit codes: 0 success, 2 invalid configuration, 3 resource guard,
//! 4 verification failure.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::{Signed, ToPrimitive};
use randfib::beta_cases::table_audit;
use randfib::bounds::{bound_sequences, growth_constants};
use randfib::polyroots::DEFAULT_TOLERANCE;
use randfib::simulate::{
    breakpoints, growth_sign_crossing, lyapunov_mc, mean_growth_sweep, McConfig, SweepMode, SweepValue,
    DEFAULT_BREAKPOINT_LEVEL_CAP,
};
use randfib::tree::{enumerate, EnumerationLimits, SeedPair, DEFAULT_MAX_LEVEL};
use randfib::verify::{run_suite, Suite, VerifyConfig};
use randfib::{parse_rational, Rational, ScaledFloat};
use serde_json::{json, Value as Json};

use output::{exact, render, write_output, Format, Table};

/// Upper limit on the number of points a `lo:hi:step` grid may expand to.
const MAX_GRID_POINTS: usize = 1_000_000;

#[derive(Parser)]
#[command(name = "randfib", version, about = "Random Fibonacci sequences: exact trees, bounds and growth")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Output format; `roots` and `beta-audit` default to json, everything else to csv.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Cap on worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum EnumMode {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SweepKind {
    Exact,
    Mc,
}

#[derive(Subcommand)]
enum Command {
    /// Row statistics of the sign tree for levels 0..=n.
    Enumerate {
        #[arg(long, default_value = "1")]
        beta: String,
        #[arg(long, default_value_t = 10)]
        n: u32,
        /// Seed pair `x0,x1`.
        #[arg(long, default_value = "1,1")]
        seed_pair: String,
        #[arg(long, value_enum, default_value_t = EnumMode::Exact)]
        mode: EnumMode,
        #[arg(long, default_value_t = DEFAULT_MAX_LEVEL)]
        max_level: u32,
    },
    /// Lower and upper row-sum recurrences against the exact β = 1 tree.
    Bounds {
        #[arg(long, default_value_t = 25)]
        n: u32,
        /// Initial sums `S0,S1,S2`; defaults to the tree's own first three row sums.
        #[arg(long)]
        initials: Option<String>,
        #[arg(long, default_value = "1,1")]
        seed_pair: String,
        #[arg(long, default_value_t = DEFAULT_MAX_LEVEL)]
        max_level: u32,
    },
    /// Dominant roots of the bound and second-moment characteristic polynomials.
    Roots {
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
    },
    /// Checks every row of the β case table against brute-force half-tree sums.
    BetaAudit {
        #[arg(long, default_value = "2")]
        beta: String,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
    },
    /// Mean |x| at a fixed level over a grid of β.
    Sweep {
        /// `lo:hi:step` or a comma-separated list.
        #[arg(long)]
        betas: String,
        #[arg(long, default_value_t = 10)]
        level: u32,
        #[arg(long, value_enum, default_value_t = SweepKind::Exact)]
        mode: SweepKind,
        /// Trajectories per β in mc mode.
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 42)]
        rng_seed: u64,
        #[arg(long, default_value = "1,1")]
        seed_pair: String,
        #[arg(long, default_value_t = DEFAULT_MAX_LEVEL)]
        max_level: u32,
    },
    /// Monte Carlo estimate of the almost-sure growth exponent.
    Lyapunov {
        #[arg(long, conflicts_with = "betas")]
        beta: Option<String>,
        /// `lo:hi:step` or a comma-separated list.
        #[arg(long)]
        betas: Option<String>,
        #[arg(long, default_value_t = 100_000)]
        steps: u64,
        #[arg(long, default_value_t = 200)]
        trials: u64,
        #[arg(long, default_value_t = 42)]
        rng_seed: u64,
        #[arg(long, default_value_t = 64)]
        renorm_every: u32,
    },
    /// Bisects a bracket on the sign of the estimated growth exponent.
    Crossing {
        #[arg(long, default_value_t = 0.6)]
        lo: f64,
        #[arg(long, default_value_t = 0.8)]
        hi: f64,
        #[arg(long, default_value_t = 0.005)]
        tol: f64,
        #[arg(long, default_value_t = 100_000)]
        steps: u64,
        #[arg(long, default_value_t = 200)]
        trials: u64,
        #[arg(long, default_value_t = 42)]
        rng_seed: u64,
    },
    /// β values where the fixed-level mean can kink.
    Breakpoints {
        #[arg(long, default_value_t = 4)]
        level: u32,
        #[arg(long, default_value = "1,1")]
        seed_pair: String,
        #[arg(long, default_value_t = DEFAULT_BREAKPOINT_LEVEL_CAP)]
        max_level: u32,
    },
    /// Runs the property suites and reports pass/fail counts.
    Verify {
        /// One of lemma1, sandwich, ss, cases, restrictions; repeatable. Default: all.
        #[arg(long)]
        suite: Vec<String>,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 25)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
    },
}

enum Failure {
    Config(String),
    Resource(String),
    Verification(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Config(_) => 2,
            Failure::Resource(_) => 3,
            Failure::Verification(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Resource(m) | Failure::Verification(m) | Failure::Io(m) => m,
        }
    }
}

impl From<randfib::Error> for Failure {
    fn from(e: randfib::Error) -> Self {
        if e.is_resource_guard() {
            Failure::Resource(e.to_string())
        } else {
            Failure::Config(e.to_string())
        }
    }
}

type CmdResult<T> = std::result::Result<T, Failure>;

/// A rendered table plus an optional verification failure to report after writing it.
struct Outcome {
    command: &'static str,
    config: Json,
    table: Table,
    default_format: Format,
    failed: Option<String>,
}

fn parse_seed_pair(text: &str) -> CmdResult<SeedPair<Rational>> {
    let (a, b) = text
        .split_once(',')
        .ok_or_else(|| Failure::Config(format!("seed pair must be `x0,x1`, got `{text}`")))?;
    Ok(SeedPair::new(parse_rational(a)?, parse_rational(b)?)?)
}

fn positive_rational(name: &str, text: &str) -> CmdResult<Rational> {
    let r = parse_rational(text)?;
    if !r.is_positive() {
        return Err(Failure::Config(format!("{name} must be positive, got {text}")));
    }
    Ok(r)
}

/// Expands `lo:hi:step` exactly, or splits a comma-separated list.
fn parse_grid(text: &str) -> CmdResult<Vec<Rational>> {
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [lo, hi, step] => {
            let (lo, hi, step) = (parse_rational(lo)?, parse_rational(hi)?, parse_rational(step)?);
            if !step.is_positive() {
                return Err(Failure::Config(format!("grid step must be positive in `{text}`")));
            }
            if hi < lo {
                return Err(Failure::Config(format!("grid end is below its start in `{text}`")));
            }
            let count = ((&hi - &lo) / &step).floor().to_usize().unwrap_or(usize::MAX);
            if count >= MAX_GRID_POINTS {
                return Err(Failure::Config(format!("grid `{text}` exceeds {MAX_GRID_POINTS} points")));
            }
            Ok((0..=count)
                .map(|k| &lo + &step * Rational::from_integer(k.into()))
                .collect())
        }
        [single] => single.split(',').map(|s| Ok(parse_rational(s)?)).collect(),
        _ => Err(Failure::Config(format!("cannot parse grid `{text}`"))),
    }
}

fn limits(max_level: u32) -> CmdResult<EnumerationLimits> {
    let mut l = EnumerationLimits::from_env()?;
    l.max_level = max_level;
    Ok(l)
}

fn seed_json(seed: &SeedPair<Rational>) -> Json {
    json!([exact(seed.x0()), exact(seed.x1())])
}

fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn cmd_enumerate(beta: &str, n: u32, seed_pair: &str, mode: EnumMode, max_level: u32) -> CmdResult<Outcome> {
    let beta = positive_rational("beta", beta)?;
    let seed = parse_seed_pair(seed_pair)?;
    let limits = limits(max_level)?;
    let config = json!({
        "beta": exact(&beta),
        "n": n,
        "seed_pair": seed_json(&seed),
        "mode": match mode { EnumMode::Exact => "exact", EnumMode::Float => "float" },
        "max_level": limits.max_level,
        "state_cap": limits.max_states,
    });
    let mut table = Table::new(&["level", "S", "SS", "mean_abs", "raw_second", "variance"]);
    match mode {
        EnumMode::Exact => {
            for r in enumerate(&seed, beta, n, &limits)? {
                table.push(vec![
                    json!(r.level),
                    json!(exact(&r.sum)),
                    json!(exact(&r.sum_sq)),
                    json!(exact(&r.mean_abs)),
                    json!(exact(&r.raw_second)),
                    json!(exact(&r.variance)),
                ]);
            }
        }
        EnumMode::Float => {
            let f = |r: &Rational| ScaledFloat::from_f64(to_f64(r));
            let seed = SeedPair::new(f(seed.x0()), f(seed.x1()))?;
            for r in enumerate(&seed, f(&beta), n, &limits)? {
                table.push(vec![
                    json!(r.level),
                    json!(r.sum.to_string()),
                    json!(r.sum_sq.to_string()),
                    json!(r.mean_abs.to_string()),
                    json!(r.raw_second.to_string()),
                    json!(r.variance.to_string()),
                ]);
            }
        }
    }
    Ok(Outcome {
        command: "enumerate",
        config,
        table,
        default_format: Format::Csv,
        failed: None,
    })
}

fn cmd_bounds(n: u32, initials: Option<&str>, seed_pair: &str, max_level: u32) -> CmdResult<Outcome> {
    let seed = parse_seed_pair(seed_pair)?;
    let limits = limits(max_level)?;
    let given: Option<Vec<Rational>> = initials
        .map(|text| text.split(',').map(|s| Ok(parse_rational(s)?)).collect::<CmdResult<_>>())
        .transpose()?;
    if let Some(v) = &given {
        if v.len() != 3 {
            return Err(Failure::Config(format!("--initials takes three values, got {}", v.len())));
        }
        // validates before the enumeration runs
        bound_sequences([&v[0], &v[1], &v[2]], 2)?;
    }
    let n_max = n.max(2);
    let rows = enumerate(&seed, Rational::from_integer(1.into()), n_max, &limits)?;
    let sums: Vec<Rational> = rows.into_iter().map(|r| r.sum).collect();
    let init = given.unwrap_or_else(|| sums[..3].to_vec());
    let b = bound_sequences([&init[0], &init[1], &init[2]], n_max as usize)?;
    let config = json!({
        "beta": "1",
        "n": n,
        "initials": init.iter().map(exact).collect::<Vec<_>>(),
        "seed_pair": seed_json(&seed),
        "max_level": limits.max_level,
        "state_cap": limits.max_states,
    });
    let mut table = Table::new(&["n", "L", "S", "U", "verdict", "lower_halved_ratio", "upper_halved_ratio"]);
    let mut first_bad = None;
    for k in 0..=n as usize {
        let ok = b.lower[k] <= sums[k] && sums[k] <= b.upper[k];
        if !ok && first_bad.is_none() {
            first_bad = Some(k);
        }
        table.push(vec![
            json!(k),
            json!(exact(&b.lower[k])),
            json!(exact(&sums[k])),
            json!(exact(&b.upper[k])),
            json!(if ok { "pass" } else { "fail" }),
            json!(b.lower_halved_ratio(k)),
            json!(b.upper_halved_ratio(k)),
        ]);
    }
    Ok(Outcome {
        command: "bounds",
        config,
        table,
        default_format: Format::Csv,
        failed: first_bad.map(|k| format!("L ≤ S ≤ U fails at n = {k}")),
    })
}

fn cmd_roots(tol: f64) -> CmdResult<Outcome> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Failure::Config(format!("tol must lie in (0, 1), got {tol}")));
    }
    let g = growth_constants(tol)?;
    let mut table = Table::new(&[
        "lower_root",
        "upper_root",
        "lower_growth",
        "upper_growth",
        "ss_root_growth",
        "mean_sq_growth",
    ]);
    table.push(vec![
        json!(g.lower_root),
        json!(g.upper_root),
        json!(g.lower_growth),
        json!(g.upper_growth),
        json!(g.ss_root_growth),
        json!(g.mean_sq_growth),
    ]);
    Ok(Outcome {
        command: "roots",
        config: json!({ "tol": tol }),
        table,
        default_format: Format::Json,
        failed: None,
    })
}

const AUDIT_COLUMNS: [&str; 16] = [
    "case",
    "beta",
    "conditions",
    "restriction",
    "printed_sum",
    "derived_sum",
    "satisfiable",
    "witness_a",
    "witness_b",
    "brute_sum",
    "eq_derived_sum",
    "table_printed_sum",
    "agree_eq",
    "agree_table",
    "verdict",
    "note",
];

fn cmd_beta_audit(beta: &str, trials: u64, rng_seed: u64) -> CmdResult<Outcome> {
    let beta = positive_rational("beta", beta)?;
    let rows = table_audit(&beta, trials, rng_seed)?;
    let mut table = Table::new(&AUDIT_COLUMNS);
    let mut failed = None;
    for row in &rows {
        if row.agree_eq == Some(false) {
            failed.get_or_insert_with(|| format!("derived sum disagrees with brute force for case {}", row.case));
        }
        let obj = serde_json::to_value(row).expect("audit rows serialize");
        table.push(AUDIT_COLUMNS.iter().map(|k| obj[*k].clone()).collect());
    }
    Ok(Outcome {
        command: "beta-audit",
        config: json!({ "beta": exact(&beta), "trials": trials, "rng_seed": rng_seed }),
        table,
        default_format: Format::Json,
        failed,
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    betas: &str,
    level: u32,
    kind: SweepKind,
    samples: u64,
    rng_seed: u64,
    seed_pair: &str,
    max_level: u32,
) -> CmdResult<Outcome> {
    let grid = parse_grid(betas)?;
    let seed = parse_seed_pair(seed_pair)?;
    let limits = limits(max_level)?;
    let mode = match kind {
        SweepKind::Exact => SweepMode::Exact,
        SweepKind::Mc => SweepMode::Mc { samples, rng_seed },
    };
    let mut config = json!({
        "betas": betas,
        "level": level,
        "mode": match kind { SweepKind::Exact => "exact", SweepKind::Mc => "mc" },
        "seed_pair": seed_json(&seed),
    });
    match kind {
        SweepKind::Exact => {
            config["max_level"] = json!(limits.max_level);
            config["state_cap"] = json!(limits.max_states);
        }
        SweepKind::Mc => {
            config["samples"] = json!(samples);
            config["rng_seed"] = json!(rng_seed);
        }
    }
    let points = mean_growth_sweep(&grid, level, mode, &seed, &limits)?;
    let mut table = Table::new(&["beta", "level", "mean_abs", "mode"]);
    for p in points {
        let value = match &p.mean_abs {
            SweepValue::Exact(r) => json!(exact(r)),
            SweepValue::Sampled { mean, .. } => json!(mean),
        };
        table.push(vec![json!(exact(&p.beta)), json!(p.level), value, json!(p.mean_abs.mode())]);
    }
    Ok(Outcome {
        command: "sweep",
        config,
        table,
        default_format: Format::Csv,
        failed: None,
    })
}

fn cmd_lyapunov(beta: Option<&str>, betas: Option<&str>, mc: McConfig) -> CmdResult<Outcome> {
    let grid = match (beta, betas) {
        (_, Some(g)) => parse_grid(g)?,
        (Some(b), None) => vec![parse_rational(b)?],
        (None, None) => vec![Rational::from_integer(1.into())],
    };
    if let Some(bad) = grid.iter().find(|b| b.is_negative()) {
        return Err(Failure::Config(format!("beta must be nonnegative, got {}", exact(bad))));
    }
    if mc.steps == 0 || mc.trials == 0 || mc.renorm_every == 0 {
        return Err(Failure::Config("steps, trials and renorm-every must be at least 1".into()));
    }
    let config = json!({
        "betas": grid.iter().map(exact).collect::<Vec<_>>(),
        "steps": mc.steps,
        "trials": mc.trials,
        "rng_seed": mc.rng_seed,
        "renorm_every": mc.renorm_every,
    });
    let mut table = Table::new(&["beta", "gamma", "stderr", "growth_factor", "steps", "trials", "rng_seed"]);
    for b in &grid {
        let e = lyapunov_mc(to_f64(b), &mc)?;
        table.push(vec![
            json!(exact(b)),
            json!(e.gamma),
            json!(e.stderr),
            json!(e.growth_factor),
            json!(e.steps),
            json!(e.trials),
            json!(e.rng_seed),
        ]);
    }
    Ok(Outcome {
        command: "lyapunov",
        config,
        table,
        default_format: Format::Csv,
        failed: None,
    })
}

fn cmd_crossing(lo: f64, hi: f64, tol: f64, mc: McConfig) -> CmdResult<Outcome> {
    let c = growth_sign_crossing(lo, hi, tol, &mc)?;
    let mut table = Table::new(&[
        "beta",
        "lo",
        "hi",
        "gamma_lo",
        "gamma_hi",
        "evaluations",
        "steps",
        "trials",
        "rng_seed",
    ]);
    table.push(vec![
        json!(c.beta),
        json!(c.lo),
        json!(c.hi),
        json!(c.gamma_lo),
        json!(c.gamma_hi),
        json!(c.evaluations),
        json!(mc.steps),
        json!(mc.trials),
        json!(mc.rng_seed),
    ]);
    Ok(Outcome {
        command: "crossing",
        config: json!({
            "lo": lo, "hi": hi, "tol": tol,
            "steps": mc.steps, "trials": mc.trials, "rng_seed": mc.rng_seed,
        }),
        table,
        default_format: Format::Csv,
        failed: None,
    })
}

fn cmd_breakpoints(level: u32, seed_pair: &str, max_level: u32) -> CmdResult<Outcome> {
    let seed = parse_seed_pair(seed_pair)?;
    let bps = breakpoints(&seed, level, max_level)?;
    let mut table = Table::new(&[
        "level",
        "beta_exact",
        "beta_approx",
        "lo",
        "hi",
        "polynomial",
        "origin_prev",
        "origin_curr",
    ]);
    for b in bps {
        table.push(vec![
            json!(b.level),
            json!(b.exact.as_ref().map(exact)),
            json!(b.beta_approx),
            json!(exact(&b.lo)),
            json!(exact(&b.hi)),
            json!(b.polynomial.to_string()),
            json!(b.origin_prev.to_string()),
            json!(b.origin_curr.to_string()),
        ]);
    }
    Ok(Outcome {
        command: "breakpoints",
        config: json!({ "level": level, "seed_pair": seed_json(&seed), "max_level": max_level }),
        table,
        default_format: Format::Csv,
        failed: None,
    })
}

fn cmd_verify(suites: &[String], trials: u64, n: u32, rng_seed: u64) -> CmdResult<Outcome> {
    let selected: Vec<Suite> = if suites.is_empty() {
        Suite::ALL.to_vec()
    } else {
        suites.iter().map(|s| s.parse::<Suite>()).collect::<Result<_, _>>()?
    };
    let cfg = VerifyConfig {
        trials,
        rng_seed,
        n_max: n,
        limits: EnumerationLimits::from_env()?,
    };
    let mut table = Table::new(&["suite", "checked", "failures", "passed", "first_failure"]);
    let mut failed = Vec::new();
    for suite in &selected {
        let r = run_suite(*suite, &cfg)?;
        if !r.passed() {
            failed.push(suite.name());
        }
        table.push(vec![
            json!(suite.name()),
            json!(r.checked),
            json!(r.failures),
            json!(r.passed()),
            json!(r.first_failure),
        ]);
    }
    Ok(Outcome {
        command: "verify",
        config: json!({
            "suites": selected.iter().map(|s| s.name()).collect::<Vec<_>>(),
            "trials": trials,
            "n": n,
            "rng_seed": rng_seed,
            "state_cap": cfg.limits.max_states,
        }),
        table,
        default_format: Format::Csv,
        failed: (!failed.is_empty()).then(|| format!("failing suites: {}", failed.join(", "))),
    })
}

fn dispatch(command: Command) -> CmdResult<Outcome> {
    match command {
        Command::Enumerate {
            beta,
            n,
            seed_pair,
            mode,
            max_level,
        } => cmd_enumerate(&beta, n, &seed_pair, mode, max_level),
        Command::Bounds {
            n,
            initials,
            seed_pair,
            max_level,
        } => cmd_bounds(n, initials.as_deref(), &seed_pair, max_level),
        Command::Roots { tol } => cmd_roots(tol),
        Command::BetaAudit { beta, trials, rng_seed } => cmd_beta_audit(&beta, trials, rng_seed),
        Command::Sweep {
            betas,
            level,
            mode,
            samples,
            rng_seed,
            seed_pair,
            max_level,
        } => cmd_sweep(&betas, level, mode, samples, rng_seed, &seed_pair, max_level),
        Command::Lyapunov {
            beta,
            betas,
            steps,
            trials,
            rng_seed,
            renorm_every,
        } => {
            let mut mc = McConfig::new(steps, trials, rng_seed);
            mc.renorm_every = renorm_every;
            cmd_lyapunov(beta.as_deref(), betas.as_deref(), mc)
        }
        Command::Crossing {
            lo,
            hi,
            tol,
            steps,
            trials,
            rng_seed,
        } => cmd_crossing(lo, hi, tol, McConfig::new(steps, trials, rng_seed)),
        Command::Breakpoints {
            level,
            seed_pair,
            max_level,
        } => cmd_breakpoints(level, &seed_pair, max_level),
        Command::Verify {
            suite,
            trials,
            n,
            rng_seed,
        } => cmd_verify(&suite, trials, n, rng_seed),
    }
}

fn run(cli: Cli) -> CmdResult<()> {
    if let Some(t) = cli.global.threads {
        if t == 0 {
            return Err(Failure::Config("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Failure::Config(e.to_string()))?;
    }
    let outcome = dispatch(cli.command)?;
    let format = cli.global.format.unwrap_or(outcome.default_format);
    let text = render(&outcome.table, format, outcome.command, &outcome.config);
    write_output(&text, cli.global.output.as_deref()).map_err(|e| Failure::Io(e.to_string()))?;
    match outcome.failed {
        Some(msg) => Err(Failure::Verification(msg)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("randfib: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn grid_expands_exactly() {
        let g = parse_grid("0.1:1.5:0.01").ok().unwrap();
        assert_eq!(g.len(), 141);
        assert_eq!(g[0], q(1, 10));
        assert_eq!(g[140], q(3, 2));
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(parse_grid("1/2,1,2").ok().unwrap(), vec![q(1, 2), q(1, 1), q(2, 1)]);
        assert!(parse_grid("1:0:0.1").is_err());
        assert!(parse_grid("0:1:0").is_err());
    }

    #[test]
    fn exact_formatting() {
        assert_eq!(exact(&q(7, 4)), "1.75");
        assert_eq!(exact(&q(-1, 20)), "-0.05");
        assert_eq!(exact(&q(14, 1)), "14");
        assert_eq!(exact(&q(1, 3)), "1/3");
        assert_eq!(exact(&q(3, 1000)), "0.003");
        assert_eq!(exact(&Rational::zero()), "0");
    }

    #[test]
    fn seed_pair_parsing() {
        let s = parse_seed_pair("0,1/2").ok().unwrap();
        assert_eq!((s.x0().clone(), s.x1().clone()), (q(0, 1), q(1, 2)));
        assert!(parse_seed_pair("0,0").is_err());
        assert!(parse_seed_pair("1").is_err());
    }
}
