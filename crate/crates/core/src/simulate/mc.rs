use std::f64::consts::LN_2;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Default number of steps between rescalings of the working pair.
pub const DEFAULT_RENORM_EVERY: u32 = 64;

/// Monte Carlo sizing. Trial `t` draws from stream `t` of a ChaCha8 generator
/// keyed by `rng_seed`, so results do not depend on scheduling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct McConfig {
    pub steps: u64,
    pub trials: u64,
    pub rng_seed: u64,
    pub renorm_every: u32,
}

impl McConfig {
    pub fn new(steps: u64, trials: u64, rng_seed: u64) -> Self {
        McConfig {
            steps,
            trials,
            rng_seed,
            renorm_every: DEFAULT_RENORM_EVERY,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.steps == 0 {
            return Err(Error::out_of_range("steps", "at least 1", self.steps));
        }
        if self.trials == 0 {
            return Err(Error::out_of_range("trials", "at least 1", self.trials));
        }
        if self.renorm_every == 0 {
            return Err(Error::out_of_range("renorm_every", "at least 1", self.renorm_every));
        }
        Ok(())
    }
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig::new(100_000, 200, 42)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LyapunovEstimate {
    pub beta: f64,
    /// Mean over trials of `log‖(x[n-1], x[n])‖∞ / n`.
    pub gamma: f64,
    pub stderr: f64,
    pub growth_factor: f64,
    pub steps: u64,
    pub trials: u64,
    pub rng_seed: u64,
}

pub(crate) fn trial_stream(rng_seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    rng.set_stream(stream);
    rng
}

/// Fair signs, one random bit per step.
pub(crate) struct SignSource {
    rng: ChaCha8Rng,
    bits: u64,
    left: u32,
}

impl SignSource {
    pub(crate) fn new(rng: ChaCha8Rng) -> Self {
        SignSource { rng, bits: 0, left: 0 }
    }

    #[inline]
    pub(crate) fn next_plus(&mut self) -> bool {
        if self.left == 0 {
            self.bits = self.rng.next_u64();
            self.left = 64;
        }
        let plus = self.bits & 1 == 1;
        self.bits >>= 1;
        self.left -= 1;
        plus
    }
}

fn binary_exponent(x: f64) -> i64 {
    ((x.to_bits() >> 52) & 0x7ff) as i64 - 1023
}

/// Divides both entries by the power of two at the top of `max(|prev|, |curr|)`.
/// Power-of-two scaling is exact, so the cadence never changes the result.
#[inline]
fn rescale(prev: &mut f64, curr: &mut f64, exp2: &mut i64) {
    let m = prev.abs().max(curr.abs());
    if m == 0.0 || !m.is_normal() {
        return;
    }
    let e = binary_exponent(m);
    let s = 2f64.powi(-e as i32);
    *prev *= s;
    *curr *= s;
    *exp2 += e;
}

fn trial_log_growth(beta: f64, steps: u64, renorm_every: u64, mut signs: SignSource) -> f64 {
    let (mut prev, mut curr) = (1.0f64, 1.0f64);
    let mut exp2 = 0i64;
    let mut since = 0u64;
    for _ in 0..steps {
        let next = if signs.next_plus() {
            prev + beta * curr
        } else {
            prev - beta * curr
        };
        prev = curr;
        curr = next;
        since += 1;
        if since == renorm_every {
            rescale(&mut prev, &mut curr, &mut exp2);
            since = 0;
        }
    }
    rescale(&mut prev, &mut curr, &mut exp2);
    // the pair never vanishes (the step matrix is invertible), so the norm is positive
    let norm = prev.abs().max(curr.abs());
    (exp2 as f64 * LN_2 + norm.ln()) / steps as f64
}

/// Keeps `(1 + β)^cadence` well inside the f64 range.
fn safe_cadence(beta: f64, requested: u32) -> u64 {
    let per_step = (1.0 + beta).log2().max(1.0);
    let limit = (900.0 / per_step).floor().max(1.0) as u64;
    u64::from(requested).min(limit)
}

/// Estimates the almost-sure growth exponent of `x[n+1] = x[n-1] ± β·x[n]`
/// from the seed `(1, 1)`.
///
/// Each trial keeps `(x[n-1], x[n])` rescaled to max-norm in `[1, 2)`, tracks
/// the removed power of two as an integer, and takes the log once at the end.
/// The final max-norm rather than `|x[n]|` alone is used, so a trajectory that
/// happens to end on a zero term still contributes a finite value.
pub fn lyapunov_mc(beta: f64, cfg: &McConfig) -> Result<LyapunovEstimate> {
    cfg.validate()?;
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(Error::out_of_range("beta", "finite and nonnegative", beta));
    }
    let cadence = safe_cadence(beta, cfg.renorm_every);
    let per_trial: Vec<f64> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let signs = SignSource::new(trial_stream(cfg.rng_seed, t));
            trial_log_growth(beta, cfg.steps, cadence, signs)
        })
        .collect();
    let (gamma, stderr) = mean_and_stderr(&per_trial);
    Ok(LyapunovEstimate {
        beta,
        gamma,
        stderr,
        growth_factor: gamma.exp(),
        steps: cfg.steps,
        trials: cfg.trials,
        rng_seed: cfg.rng_seed,
    })
}

/// Fixed-order mean and standard error of the mean.
pub(crate) fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Crossing {
    pub beta: f64,
    pub lo: f64,
    pub hi: f64,
    pub gamma_lo: f64,
    pub gamma_hi: f64,
    pub evaluations: u32,
}

/// Bisects `[beta_lo, beta_hi]` on the sign of the estimated `γ` until the
/// bracket is narrower than `tol`, and returns its midpoint.
///
/// Every evaluation reuses `mc.rng_seed`, so neighbouring β values see the same
/// sign sequences.
pub fn growth_sign_crossing(beta_lo: f64, beta_hi: f64, tol: f64, mc: &McConfig) -> Result<Crossing> {
    if !(beta_lo < beta_hi) {
        return Err(Error::out_of_range("bracket", "lo < hi", format!("[{beta_lo}, {beta_hi}]")));
    }
    if !(tol > 0.0) {
        return Err(Error::out_of_range("tol", "positive", tol));
    }
    let gamma = |b: f64| lyapunov_mc(b, mc).map(|e| e.gamma);
    let (mut lo, mut hi) = (beta_lo, beta_hi);
    let (mut g_lo, mut g_hi) = (gamma(lo)?, gamma(hi)?);
    let mut evaluations = 2;
    if g_lo.signum() == g_hi.signum() {
        return Err(Error::SameSignBracket {
            lo,
            hi,
            gamma_lo: g_lo,
            gamma_hi: g_hi,
        });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let g_mid = gamma(mid)?;
        evaluations += 1;
        if g_mid.signum() == g_lo.signum() {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
            g_hi = g_mid;
        }
    }
    Ok(Crossing {
        beta: 0.5 * (lo + hi),
        lo,
        hi,
        gamma_lo: g_lo,
        gamma_hi: g_hi,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_zero_has_unit_growth() {
        let e = lyapunov_mc(0.0, &McConfig::new(1000, 8, 1)).unwrap();
        assert_eq!(e.gamma, 0.0);
        assert_eq!(e.growth_factor, 1.0);
        assert_eq!(e.stderr, 0.0);
    }

    #[test]
    fn identical_config_is_bitwise_reproducible() {
        let cfg = McConfig::new(5000, 16, 7);
        let a = lyapunov_mc(1.0, &cfg).unwrap();
        let b = lyapunov_mc(1.0, &cfg).unwrap();
        assert_eq!(a.gamma.to_bits(), b.gamma.to_bits());
        assert_eq!(a.stderr.to_bits(), b.stderr.to_bits());
        let serial = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let c = serial.install(|| lyapunov_mc(1.0, &cfg).unwrap());
        assert_eq!(a.gamma.to_bits(), c.gamma.to_bits());
    }

    #[test]
    fn cadence_does_not_change_the_result() {
        let mut cfg = McConfig::new(4000, 8, 3);
        let a = lyapunov_mc(1.3, &cfg).unwrap();
        cfg.renorm_every = 7;
        let b = lyapunov_mc(1.3, &cfg).unwrap();
        assert_eq!(a.gamma.to_bits(), b.gamma.to_bits());
    }

    #[test]
    fn large_beta_grows_fast_on_two_seeds() {
        for seed in [1, 2] {
            let e = lyapunov_mc(2.0, &McConfig::new(20_000, 20, seed)).unwrap();
            assert!(e.growth_factor > 1.5, "{e:?}");
        }
        // no overflow with an enormous multiplier
        let e = lyapunov_mc(1e30, &McConfig::new(2000, 2, 1)).unwrap();
        assert!((e.gamma - 1e30f64.ln()).abs() < 0.1);
    }

    #[test]
    fn sign_source_is_fair_enough() {
        let mut s = SignSource::new(trial_stream(0, 0));
        let plus = (0..100_000).filter(|_| s.next_plus()).count();
        assert!((plus as i64 - 50_000).abs() < 1_000);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(lyapunov_mc(1.0, &McConfig::new(0, 1, 0)).is_err());
        assert!(lyapunov_mc(1.0, &McConfig::new(1, 0, 0)).is_err());
        assert!(lyapunov_mc(-1.0, &McConfig::new(1, 1, 0)).is_err());
        assert!(growth_sign_crossing(0.8, 0.6, 0.01, &McConfig::new(10, 1, 0)).is_err());
    }

    #[test]
    fn same_sign_bracket_is_rejected() {
        let err = growth_sign_crossing(0.9, 1.1, 0.01, &McConfig::new(20_000, 20, 1)).unwrap_err();
        match err {
            Error::SameSignBracket { gamma_lo, gamma_hi, .. } => {
                assert!(gamma_lo > 0.0 && gamma_hi > 0.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
