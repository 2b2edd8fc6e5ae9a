//! Exact and sampled statistics of random Fibonacci sequences
//! `x[n+1] = x[n-1] ± β·x[n]` with fair, independent signs.
//!
//! The crate is organised around the binary sign tree of the recursion:
//!
//! * [`tree`] enumerates the tree level by level, merging nodes that carry the
//!   same `(previous, current)` pair, and reports exact row sums and moments.
//! * [`bounds`] holds the three-level subtree inequality, the upper and lower
//!   row-sum recurrences it yields, the exact second-moment recurrence, and the
//!   growth constants derived from their characteristic polynomials.
//! * [`polyroots`] finds real roots of the quadratic and cubic characteristic
//!   polynomials.
//! * [`beta_cases`] classifies the β-scaled half-tree into its six sign cases and
//!   audits the closed-form sums against brute force.
//! * [`simulate`] estimates the almost-sure growth exponent by Monte Carlo,
//!   sweeps the fixed-level mean over β, and locates the kinks of that map.
//! * [`verify`] bundles the randomized property suites behind `randfib verify`.
//!
//! Row 0 of the tree holds the seed pair `(x0, x1)`; row `n` holds the `2^n`
//! possible values of `x[n+1]`. Growth rates do not depend on that offset.

pub mod beta_cases;
pub mod bounds;
mod error;
pub mod exact_poly;
pub mod polyroots;
pub mod scalar;
pub mod simulate;
pub mod tree;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::{parse_rational, Rational, ScaledFloat, Value};
