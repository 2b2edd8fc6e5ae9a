//! Randomized and exhaustive property suites.
//!
//! Each suite counts checks and failures instead of panicking so the CLI can
//! report them and pick an exit code.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::beta_cases::{case_report, case_restriction_satisfiable, CaseId};
use crate::bounds::{bound_sequences, lemma1_check, ss_sequence};
use crate::error::{Error, Result};
use crate::scalar::{Rational, Value};
use crate::tree::{enumerate, EnumerationLimits, SeedPair};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Lemma1,
    Sandwich,
    SecondMoment,
    Cases,
    Restrictions,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Lemma1,
        Suite::Sandwich,
        Suite::SecondMoment,
        Suite::Cases,
        Suite::Restrictions,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemma1 => "lemma1",
            Suite::Sandwich => "sandwich",
            Suite::SecondMoment => "ss",
            Suite::Cases => "cases",
            Suite::Restrictions => "restrictions",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::out_of_range("suite", "one of lemma1, sandwich, ss, cases, restrictions", s))
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    /// Random samples for the fuzzing suites.
    pub trials: u64,
    pub rng_seed: u64,
    /// Largest level for the enumeration-backed suites.
    pub n_max: u32,
    pub limits: EnumerationLimits,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            trials: 100_000,
            rng_seed: 0,
            n_max: 25,
            limits: EnumerationLimits::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checked: u64,
    pub failures: u64,
    pub first_failure: Option<String>,
}

impl SuiteReport {
    fn new(suite: Suite) -> Self {
        SuiteReport {
            suite,
            checked: 0,
            failures: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(describe());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.checked > 0
    }
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<SuiteReport> {
    match suite {
        Suite::Lemma1 => lemma1_suite(cfg),
        Suite::Sandwich => sandwich_suite(cfg),
        Suite::SecondMoment => second_moment_suite(cfg),
        Suite::Cases => cases_suite(cfg),
        Suite::Restrictions => restrictions_suite(cfg),
    }
}

/// `n / d` with `n` in `[0, 10^6]` and `d` in `[1, 1000]`.
pub fn random_rational(rng: &mut impl Rng) -> Rational {
    Rational::new(
        rng.random_range(0..=1_000_000i64).into(),
        rng.random_range(1..=1000i64).into(),
    )
}

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn lemma1_suite(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::Lemma1);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let check = |report: &mut SuiteReport, a: &Rational, b1: &Rational, b2: &Rational| -> Result<()> {
        let c = lemma1_check(a, b1, b2)?;
        report.record(c.holds, || format!("(a, b1, b2) = ({a}, {b1}, {b2})"));
        // the inequality behind the right-hand side: |b2 - |a - b2|| <= a
        let gap = b2.abs_diff(&a.abs_diff(b2));
        report.record(gap <= *a, || format!("|b2 - |a - b2|| > a at ({a}, {b2})"));
        Ok(())
    };
    for _ in 0..cfg.trials {
        let a = random_rational(&mut rng);
        let b1 = &a + random_rational(&mut rng);
        let b2 = random_rational(&mut rng);
        check(&mut report, &a, &b1, &b2)?;
    }
    let half = Rational::new(1.into(), 2.into());
    for a in [int(0), int(1), int(7), Rational::new(3.into(), 5.into()), int(1000)] {
        for b1 in [a.clone(), &a * int(2), &a + int(1)] {
            for b2 in [Rational::zero(), &a * &half, a.clone()] {
                check(&mut report, &a, &b1, &b2)?;
            }
        }
    }
    Ok(report)
}

fn sandwich_suite(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::Sandwich);
    let n_max = cfg.n_max.max(3);
    let rows = enumerate(&SeedPair::<Rational>::unit(), int(1), n_max, &cfg.limits)?;
    let sums: Vec<&Rational> = rows.iter().map(|r| &r.sum).collect();
    let bounds = bound_sequences([sums[0], sums[1], sums[2]], n_max as usize)?;
    for (n, s) in sums.iter().enumerate() {
        let (l, u) = (&bounds.lower[n], &bounds.upper[n]);
        report.record(l <= *s && *s <= u, || format!("n = {n}: L = {l}, S = {s}, U = {u}"));
    }
    Ok(report)
}

fn second_moment_suite(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::SecondMoment);
    let seeds = [((1, 1), cfg.n_max), ((0, 1), cfg.n_max.min(18)), ((3, 2), cfg.n_max.min(18))];
    for ((x0, x1), n_max) in seeds {
        let seed = SeedPair::new(int(x0), int(x1))?;
        let rows = enumerate(&seed, int(1), n_max, &cfg.limits)?;
        let from_tree: Vec<&Rational> = rows.iter().map(|r| &r.sum_sq).collect();
        let predicted = ss_sequence(from_tree[0], from_tree[1], n_max as usize)?;
        for (n, (t, p)) in from_tree.iter().zip(&predicted).enumerate() {
            report.record(*t == p, || format!("seed ({x0}, {x1}), n = {n}: tree {t}, recurrence {p}"));
        }
        for n in 2..rows.len() {
            let r = |k: usize| &rows[k].raw_second;
            report.record(*r(n) == r(n - 1) + r(n - 2), || {
                format!("seed ({x0}, {x1}), n = {n}: raw second moment is not Fibonacci")
            });
        }
    }
    Ok(report)
}

fn cases_suite(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::Cases);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed ^ 0x5eed_ca5e);
    let mut seen = [false; 6];
    for _ in 0..cfg.trials {
        let (a, b) = (random_rational(&mut rng), random_rational(&mut rng));
        if a.is_zero() && b.is_zero() {
            continue;
        }
        let beta = Rational::new(rng.random_range(1..=3000i64).into(), rng.random_range(1..=1000i64).into());
        let r = case_report(&a, &b, &beta)?;
        seen[usize::from(r.case.number()) - 1] = true;
        report.record(r.agree_eq, || format!("case {} at (a, b, β) = ({a}, {b}, {beta})", r.case));
    }
    if cfg.trials >= 10_000 {
        report.record(seen.iter().all(|&s| s), || format!("not every case was sampled: {seen:?}"));
    }
    Ok(report)
}

/// Twenty β values straddling the thresholds `1/√2` and `1`.
pub fn threshold_betas() -> Vec<Rational> {
    let mut out = Vec::new();
    // 7071068/10^7 sits just above 1/√2, 7071067/10^7 just below
    let roots = [
        (Rational::new(7_071_068.into(), 10_000_000.into()), Rational::new(7_071_067.into(), 10_000_000.into())),
        (int(1), int(1)),
    ];
    for (above, below) in roots {
        for k in [1u32, 2, 3, 4, 6] {
            let step = Rational::new(1.into(), num_traits::pow(num_bigint::BigInt::from(10), k as usize));
            out.push(&above + &step);
            out.push(&below - &step);
        }
    }
    out
}

fn restrictions_suite(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::Restrictions);
    let per_beta = (cfg.trials / 20).max(1_000);
    for beta in threshold_betas() {
        for case in CaseId::ALL {
            let sat = case_restriction_satisfiable(case, &beta, per_beta, cfg.rng_seed)?;
            let expected = case.admits(&beta);
            report.record(sat.satisfiable == expected, || {
                format!("case {case} at β = {beta}: search says {}, closed form says {expected}", sat.satisfiable)
            });
        }
    }
    Ok(report)
}
