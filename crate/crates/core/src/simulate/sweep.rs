use num_traits::ToPrimitive;
use rayon::prelude::*;

use super::mc::{mean_and_stderr, trial_stream, SignSource};
use crate::error::{Error, Result};
use crate::scalar::Rational;
use crate::tree::{level_summary, EnumerationLimits, SeedPair};

const MC_CHUNK: u64 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepMode {
    /// Full tree enumeration in rational arithmetic.
    Exact,
    /// `samples` independent trajectories per β.
    Mc { samples: u64, rng_seed: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub enum SweepValue {
    Exact(Rational),
    Sampled { mean: f64, stderr: f64, samples: u64 },
}

impl SweepValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            SweepValue::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            SweepValue::Sampled { mean, .. } => *mean,
        }
    }

    pub fn mode(&self) -> &'static str {
        match self {
            SweepValue::Exact(_) => "exact",
            SweepValue::Sampled { .. } => "mc",
        }
    }
}

/// `E|x|` at one level for one β.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepPoint {
    pub beta: Rational,
    pub level: u32,
    pub mean_abs: SweepValue,
}

fn sampled_mean(seed: (f64, f64), beta: f64, level: u32, samples: u64, rng_seed: u64) -> SweepValue {
    let chunks = samples.div_ceil(MC_CHUNK);
    let values: Vec<f64> = (0..chunks)
        .into_par_iter()
        .flat_map_iter(|chunk| {
            let n = MC_CHUNK.min(samples - chunk * MC_CHUNK);
            let mut signs = SignSource::new(trial_stream(rng_seed, chunk));
            (0..n)
                .map(|_| {
                    let (mut prev, mut curr) = seed;
                    for _ in 0..level {
                        let next = if signs.next_plus() {
                            prev + beta * curr
                        } else {
                            prev - beta * curr
                        };
                        prev = curr;
                        curr = next;
                    }
                    curr.abs()
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let (mean, stderr) = mean_and_stderr(&values);
    SweepValue::Sampled {
        mean,
        stderr,
        samples,
    }
}

/// Evaluates `E|x|` at `level` for each β in `betas`.
///
/// Level `n` is row `n` of the tree, i.e. the value `x[n+1]` after `n` signed
/// steps from `(x0, x1)`.
pub fn mean_growth_sweep(
    betas: &[Rational],
    level: u32,
    mode: SweepMode,
    seed: &SeedPair<Rational>,
    limits: &EnumerationLimits,
) -> Result<Vec<SweepPoint>> {
    for beta in betas {
        if !num_traits::Signed::is_positive(beta) {
            return Err(Error::out_of_range("beta", "positive", beta));
        }
    }
    match mode {
        SweepMode::Exact => betas
            .par_iter()
            .map(|beta| {
                let row = level_summary(seed, beta.clone(), level, limits)?;
                Ok(SweepPoint {
                    beta: beta.clone(),
                    level,
                    mean_abs: SweepValue::Exact(row.mean_abs),
                })
            })
            .collect(),
        SweepMode::Mc { samples, rng_seed } => {
            if samples == 0 {
                return Err(Error::out_of_range("samples", "at least 1", samples));
            }
            let seed = (
                seed.x0().to_f64().unwrap_or(f64::NAN),
                seed.x1().to_f64().unwrap_or(f64::NAN),
            );
            Ok(betas
                .iter()
                .map(|beta| {
                    let b = beta.to_f64().unwrap_or(f64::NAN);
                    SweepPoint {
                        beta: beta.clone(),
                        level,
                        mean_abs: sampled_mean(seed, b, level, samples, rng_seed),
                    }
                })
                .collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn exact(beta: Rational, level: u32) -> Rational {
        let pts = mean_growth_sweep(
            &[beta],
            level,
            SweepMode::Exact,
            &SeedPair::unit(),
            &EnumerationLimits::default(),
        )
        .unwrap();
        match &pts[0].mean_abs {
            SweepValue::Exact(r) => r.clone(),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn exact_examples() {
        assert_eq!(exact(q(1, 1), 3), q(7, 4));
        assert_eq!(exact(q(1, 2), 1), q(1, 1));
        assert_eq!(exact(q(2, 1), 1), q(2, 1));
    }

    #[test]
    fn sampled_mean_is_close_and_reproducible() {
        let run = || {
            mean_growth_sweep(
                &[q(1, 1)],
                3,
                SweepMode::Mc { samples: 20_000, rng_seed: 9 },
                &SeedPair::unit(),
                &EnumerationLimits::default(),
            )
            .unwrap()
        };
        let a = run();
        assert_eq!(a, run());
        match a[0].mean_abs {
            SweepValue::Sampled { mean, stderr, .. } => {
                assert!((mean - 1.75).abs() < 5.0 * stderr, "{mean} ± {stderr}");
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn exact_mode_respects_the_cap() {
        let err = mean_growth_sweep(
            &[q(1, 1)],
            30,
            SweepMode::Exact,
            &SeedPair::unit(),
            &EnumerationLimits::default(),
        )
        .unwrap_err();
        assert!(err.is_resource_guard());
    }
}
