//! Row-sum bounds for the β = 1 tree.
//!
//! Below a node `a` with children `b1 = p + a` and `b2 = |p - a|` (so
//! `b1 ≥ a`), the eight great-grandchildren sum to `σ`, and
//!
//! ```text
//! 4a + b1 + b2 + c1 + c2 + d1 + d2  ≤  σ  ≤  4a + 2b1 + 2b2 + c1 + c2 + d1 + d2.
//! ```
//!
//! Summed over a row this gives `S[n] ≥ S[n-1] + S[n-2] + 4 S[n-3]` and
//! `S[n] ≤ S[n-1] + 2 S[n-2] + 4 S[n-3]`. The squares obey the exact
//! recurrence `SS[n] = 2 SS[n-1] + 4 SS[n-2]`.

use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polyroots::{dominant_root, Polynomial};
use crate::scalar::{Rational, Value};

/// Characteristic polynomial of the lower row-sum recurrence.
pub const LOWER_CUBIC: [f64; 4] = [1.0, -1.0, -1.0, -4.0];
/// Characteristic polynomial of the upper row-sum recurrence.
pub const UPPER_CUBIC: [f64; 4] = [1.0, -1.0, -2.0, -4.0];
/// Characteristic polynomial of the second-moment recurrence.
pub const SECOND_MOMENT_QUADRATIC: [f64; 3] = [1.0, -2.0, -4.0];

/// The subtree of depth three below `a`, with `σ` computed two ways.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lemma1Subtree {
    pub a: Rational,
    pub b1: Rational,
    pub b2: Rational,
    pub c1: Rational,
    pub c2: Rational,
    pub d1: Rational,
    pub d2: Rational,
    /// Closed form `a + b1 + b2 + 2c1 + 2c2 + d1 + d2 + |b2 - |a - b2||`.
    pub sigma: Rational,
    /// Sum of the eight bottom-row leaves, expanded directly.
    pub sigma_enumerated: Rational,
    pub bottom: [Rational; 8],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lemma1Check {
    pub subtree: Lemma1Subtree,
    pub lower_bound: Rational,
    pub upper_bound: Rational,
    pub holds: bool,
}

/// Evaluates the subtree inequality at `(a, b1, b2)`.
///
/// `b2` is treated as a free input; in the tree it is determined by `a` and
/// the parent of `a`, but the inequality holds without that link.
pub fn lemma1_check(a: &Rational, b1: &Rational, b2: &Rational) -> Result<Lemma1Check> {
    if a.is_negative() {
        return Err(Error::out_of_range("a", "nonnegative", a));
    }
    if b2.is_negative() {
        return Err(Error::out_of_range("b2", "nonnegative", b2));
    }
    if b1 < a {
        return Err(Error::Precondition(format!("b1 = {b1} is below a = {a}")));
    }

    let c1 = a + b1;
    let c2 = a + b2;
    let d1 = b1 - a;
    let d2 = a.abs_diff(b2);

    let two = Rational::from_integer(2.into());
    let four = Rational::from_integer(4.into());
    let sigma = a + b1 + b2 + &two * &c1 + &two * &c2 + &d1 + &d2 + b2.abs_diff(&d2);

    // children of a node `child` whose parent is `parent`: |parent - child|, parent + child
    let leaves = |parent: &Rational, child: &Rational| [parent.abs_diff(child), parent + child];
    let [l0, l1] = leaves(b1, &c1);
    let [l2, l3] = leaves(b1, &d1);
    let [l4, l5] = leaves(b2, &c2);
    let [l6, l7] = leaves(b2, &d2);
    let bottom = [l0, l1, l2, l3, l4, l5, l6, l7];
    let sigma_enumerated = bottom.iter().fold(Rational::zero(), |acc, x| acc + x);

    let shared = &c1 + &c2 + &d1 + &d2;
    let lower_bound = &four * a + b1 + b2 + &shared;
    let upper_bound = &four * a + &two * b1 + &two * b2 + &shared;
    let holds = lower_bound <= sigma && sigma <= upper_bound && sigma == sigma_enumerated;

    Ok(Lemma1Check {
        subtree: Lemma1Subtree {
            a: a.clone(),
            b1: b1.clone(),
            b2: b2.clone(),
            c1,
            c2,
            d1,
            d2,
            sigma,
            sigma_enumerated,
            bottom,
        },
        lower_bound,
        upper_bound,
        holds,
    })
}

/// Lower and upper row-sum sequences seeded with the same three initial sums.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundSequences {
    pub lower: Vec<Rational>,
    pub upper: Vec<Rational>,
}

impl BoundSequences {
    /// `lower[n] / lower[n-1] / 2`, the finite-n per-step growth of the mean.
    pub fn lower_halved_ratio(&self, n: usize) -> Option<f64> {
        halved_ratio(&self.lower, n)
    }

    pub fn upper_halved_ratio(&self, n: usize) -> Option<f64> {
        halved_ratio(&self.upper, n)
    }
}

fn halved_ratio(seq: &[Rational], n: usize) -> Option<f64> {
    if n == 0 || n >= seq.len() {
        return None;
    }
    ToPrimitive::to_f64(&(&seq[n] / &seq[n - 1] / Rational::from_integer(2.into())))
}

/// Iterates both bound recurrences up to index `n_max`.
pub fn bound_sequences(initial: [&Rational; 3], n_max: usize) -> Result<BoundSequences> {
    for s in initial {
        if !s.is_positive() {
            return Err(Error::out_of_range("initial row sum", "positive", s));
        }
    }
    if n_max < 3 {
        return Err(Error::out_of_range("n_max", "at least 3", n_max));
    }
    let four = Rational::from_integer(4.into());
    let two = Rational::from_integer(2.into());
    let mut lower: Vec<Rational> = initial.iter().map(|s| (*s).clone()).collect();
    let mut upper = lower.clone();
    for n in 3..=n_max {
        lower.push(&lower[n - 1] + &lower[n - 2] + &four * &lower[n - 3]);
        upper.push(&upper[n - 1] + &two * &upper[n - 2] + &four * &upper[n - 3]);
    }
    Ok(BoundSequences { lower, upper })
}

/// `SS[0..=n_max]` from `SS[n] = 2 SS[n-1] + 4 SS[n-2]`.
pub fn ss_sequence(ss0: &Rational, ss1: &Rational, n_max: usize) -> Result<Vec<Rational>> {
    if ss0.is_negative() || ss1.is_negative() {
        return Err(Error::out_of_range("initial square sums", "nonnegative", format!("({ss0}, {ss1})")));
    }
    if ss0.is_zero() && ss1.is_zero() {
        return Err(Error::out_of_range("initial square sums", "not both zero", "(0, 0)"));
    }
    let two = Rational::from_integer(2.into());
    let four = Rational::from_integer(4.into());
    let mut out = vec![ss0.clone(), ss1.clone()];
    for n in 2..=n_max {
        out.push(&two * &out[n - 1] + &four * &out[n - 2]);
    }
    out.truncate(n_max + 1);
    Ok(out)
}

/// Dominant roots of the three characteristic polynomials and the per-step
/// growth factors of the normalized moments.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GrowthConstants {
    /// Real root of `x³ - x² - x - 4`.
    pub lower_root: f64,
    /// Real root of `x³ - x² - 2x - 4`.
    pub upper_root: f64,
    /// `lower_root / 2`: lower bound on the growth of `E|x_n|`.
    pub lower_growth: f64,
    /// `upper_root / 2`: upper bound on the growth of `E|x_n|`.
    pub upper_growth: f64,
    /// Dominant root `1 + √5` of `x² - 2x - 4`, the growth of `SS[n]`.
    pub ss_root_growth: f64,
    /// `(1 + √5) / 2`, the growth of `E(x_n²) = SS[n] / 2^n`.
    pub mean_sq_growth: f64,
}

pub fn growth_constants(tolerance: f64) -> Result<GrowthConstants> {
    let lower_root = dominant_root(&Polynomial::new(LOWER_CUBIC.to_vec())?, tolerance)?;
    let upper_root = dominant_root(&Polynomial::new(UPPER_CUBIC.to_vec())?, tolerance)?;
    let ss_root = dominant_root(&Polynomial::new(SECOND_MOMENT_QUADRATIC.to_vec())?, tolerance)?;
    Ok(GrowthConstants {
        lower_root,
        upper_root,
        lower_growth: lower_root / 2.0,
        upper_growth: upper_root / 2.0,
        ss_root_growth: ss_root,
        mean_sq_growth: ss_root / 2.0,
    })
}
