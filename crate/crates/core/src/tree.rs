//! Level-by-level enumeration of the sign tree with state aggregation.
//!
//! A node of the tree is the pair `(|x[k-1]|, |x[k]|)`. Replacing signed values
//! by absolute values only swaps which child is the sum and which is the
//! difference, so the multiset of `|x|` values in every row is unchanged. Nodes
//! with equal pairs have identical subtrees and are merged with a multiplicity.

use std::any::Any;
use std::collections::HashMap;
use std::env;
use std::hash::{Hash, Hasher};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::{Rational, Value};

mod scaled;

use scaled::ScaledRow;

/// Default largest level [`enumerate`] will build.
pub const DEFAULT_MAX_LEVEL: u32 = 26;
/// Default budget for distinct states in one row.
pub const DEFAULT_MAX_STATES: usize = 1 << 22;
/// Environment variable overriding [`DEFAULT_MAX_STATES`].
pub const STATE_CAP_ENV: &str = "RANDFIB_STATE_CAP";

/// Rows smaller than this are stepped on the calling thread.
const PARALLEL_THRESHOLD: usize = 1 << 12;

/// The initial pair `(x0, x1)`, both nonnegative and not both zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedPair<V> {
    x0: V,
    x1: V,
}

impl<V: Value> SeedPair<V> {
    pub fn new(x0: V, x1: V) -> Result<Self> {
        if x0.is_sign_negative() {
            return Err(Error::out_of_range("x0", "nonnegative", x0));
        }
        if x1.is_sign_negative() {
            return Err(Error::out_of_range("x1", "nonnegative", x1));
        }
        if x0.is_zero() && x1.is_zero() {
            return Err(Error::ZeroSeed);
        }
        Ok(SeedPair { x0, x1 })
    }

    /// The seed `(1, 1)`.
    pub fn unit() -> Self {
        SeedPair {
            x0: V::one(),
            x1: V::one(),
        }
    }

    pub fn x0(&self) -> &V {
        &self.x0
    }

    pub fn x1(&self) -> &V {
        &self.x1
    }
}

/// One aggregated class of tree nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeState<V> {
    pub prev: V,
    pub curr: V,
    pub count: BigUint,
}

/// One level of the sign tree, stored as distinct `(prev, curr)` states sorted
/// by key.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AggregatedRow<V> {
    level: u32,
    beta: V,
    states: Vec<NodeState<V>>,
}

/// Exact (or float-mode) statistics of one row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowSummary<V> {
    pub level: u32,
    /// Number of leaves, `2^level`.
    pub count: BigUint,
    /// Σ |x| over the row.
    pub sum: V,
    /// Σ x² over the row.
    pub sum_sq: V,
    pub mean_abs: V,
    pub raw_second: V,
    pub variance: V,
}

fn check_beta<V: Value>(beta: &V) -> Result<()> {
    if beta.is_sign_negative() || beta.is_zero() {
        return Err(Error::out_of_range("beta", "positive", beta));
    }
    Ok(())
}

/// Row 0: the single state `(x0, x1)` with multiplicity one.
pub fn root_row<V: Value>(seed: &SeedPair<V>, beta: V) -> Result<AggregatedRow<V>> {
    check_beta(&beta)?;
    Ok(AggregatedRow {
        level: 0,
        beta,
        states: vec![NodeState {
            prev: seed.x0.clone(),
            curr: seed.x1.clone(),
            count: BigUint::one(),
        }],
    })
}

/// Expands every state into its two children and merges equal keys.
pub fn step_row<V: Value>(row: &AggregatedRow<V>) -> AggregatedRow<V> {
    row.step()
}

pub fn row_stats<V: Value>(row: &AggregatedRow<V>) -> RowSummary<V> {
    row.stats()
}

/// `(prev, curr)` keyed by [`Value::hash_key`].
#[derive(PartialEq, Eq)]
struct Key<V>(V, V);

impl<V: Value> Hash for Key<V> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash_key(state);
        self.1.hash_key(state);
    }
}

type StateMap<V> = HashMap<Key<V>, BigUint>;

fn merge_count(slot: &mut BigUint, count: &BigUint) {
    if cfg!(feature = "inject-fault") {
        // negative control: merged multiplicities are lost
        if slot.is_zero() {
            *slot = count.clone();
        }
    } else {
        *slot += count;
    }
}

fn expand_into<V: Value>(map: &mut StateMap<V>, states: &[NodeState<V>], beta: &V) {
    for s in states {
        let scaled = beta.mul_ref(&s.curr);
        let diff = s.prev.abs_diff(&scaled);
        let sum = s.prev.add_ref(&scaled);
        merge_count(map.entry(Key(s.curr.clone(), diff)).or_default(), &s.count);
        merge_count(map.entry(Key(s.curr.clone(), sum)).or_default(), &s.count);
    }
}

fn merge_maps<V: Value>(mut a: StateMap<V>, b: StateMap<V>) -> StateMap<V> {
    if a.len() < b.len() {
        return merge_maps(b, a);
    }
    for (key, count) in b {
        merge_count(a.entry(key).or_default(), &count);
    }
    a
}

impl<V: Value> AggregatedRow<V> {
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn beta(&self) -> &V {
        &self.beta
    }

    pub fn states(&self) -> &[NodeState<V>] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Multiplicity of the state `(prev, curr)`, if present.
    pub fn count_of(&self, prev: &V, curr: &V) -> Option<&BigUint> {
        self.states
            .binary_search_by(|s| (&s.prev, &s.curr).cmp(&(prev, curr)))
            .ok()
            .map(|i| &self.states[i].count)
    }

    /// Σ counts; equals `2^level` for every row built by this module.
    pub fn total_count(&self) -> BigUint {
        self.states.iter().map(|s| &s.count).sum()
    }

    pub fn step(&self) -> AggregatedRow<V> {
        let map = if self.states.len() < PARALLEL_THRESHOLD {
            let mut map = StateMap::with_capacity(self.states.len() * 2);
            expand_into(&mut map, &self.states, &self.beta);
            map
        } else {
            self.states
                .par_chunks(PARALLEL_THRESHOLD)
                .map(|chunk| {
                    let mut map = StateMap::with_capacity(chunk.len() * 2);
                    expand_into(&mut map, chunk, &self.beta);
                    map
                })
                .reduce(StateMap::new, merge_maps)
        };
        let mut states: Vec<NodeState<V>> = map
            .into_iter()
            .map(|(Key(prev, curr), count)| NodeState { prev, curr, count })
            .collect();
        states.par_sort_unstable_by(|a, b| (&a.prev, &a.curr).cmp(&(&b.prev, &b.curr)));
        AggregatedRow {
            level: self.level + 1,
            beta: self.beta.clone(),
            states,
        }
    }

    pub fn stats(&self) -> RowSummary<V> {
        let mut sum = V::zero();
        let mut sum_sq = V::zero();
        for s in &self.states {
            let k = V::from_count(&s.count);
            let weighted = k.mul_ref(&s.curr);
            sum_sq = sum_sq.add_ref(&weighted.mul_ref(&s.curr));
            sum = sum.add_ref(&weighted);
        }
        let mean_abs = sum.div_pow2(self.level);
        let raw_second = sum_sq.div_pow2(self.level);
        let variance = raw_second.saturating_sub(&mean_abs.mul_ref(&mean_abs));
        RowSummary {
            level: self.level,
            count: BigUint::one() << self.level,
            sum,
            sum_sq,
            mean_abs,
            raw_second,
            variance,
        }
    }
}

/// Resource guard for [`enumerate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationLimits {
    pub max_level: u32,
    pub max_states: usize,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits {
            max_level: DEFAULT_MAX_LEVEL,
            max_states: DEFAULT_MAX_STATES,
        }
    }
}

impl EnumerationLimits {
    /// Defaults, with the state budget taken from `RANDFIB_STATE_CAP` when set.
    pub fn from_env() -> Result<Self> {
        let mut limits = Self::default();
        if let Ok(raw) = env::var(STATE_CAP_ENV) {
            limits.max_states = raw
                .trim()
                .parse()
                .map_err(|_| Error::out_of_range(STATE_CAP_ENV, "a positive integer", &raw))?;
        }
        Ok(limits)
    }

    fn check_level(&self, level: u32) -> Result<()> {
        if level > self.max_level {
            return Err(Error::LevelCap {
                requested: level,
                cap: self.max_level,
            });
        }
        Ok(())
    }

    fn check_row<V>(&self, row: &AggregatedRow<V>) -> Result<()> {
        if row.states.len() > self.max_states {
            return Err(Error::StateBudget {
                level: row.level,
                states: row.states.len(),
                budget: self.max_states,
            });
        }
        Ok(())
    }
}

/// The exact arguments, when `V` is [`Rational`]: exact rows take the integer
/// path in [`scaled`].
fn exact_args<'a, V: Value>(seed: &'a SeedPair<V>, beta: &'a V) -> Option<(&'a SeedPair<Rational>, &'a Rational)> {
    let seed = (seed as &dyn Any).downcast_ref()?;
    let beta = (beta as &dyn Any).downcast_ref()?;
    Some((seed, beta))
}

/// Identity conversion back from the exact path; only called with `T == U`.
fn cast<T: 'static, U: 'static>(x: T) -> U {
    *(Box::new(x) as Box<dyn Any>).downcast().expect("exact path returns the caller's type")
}

/// Builds rows up to `level` and returns the last one.
pub fn build_row<V: Value>(
    seed: &SeedPair<V>,
    beta: V,
    level: u32,
    limits: &EnumerationLimits,
) -> Result<AggregatedRow<V>> {
    limits.check_level(level)?;
    if let Some((seed, beta)) = exact_args(seed, &beta) {
        check_beta(beta)?;
        let mut row = ScaledRow::root(seed, beta.clone());
        for _ in 0..level {
            row = row.step();
            row.check(limits)?;
        }
        return Ok(cast(row.into_row()));
    }
    let mut row = root_row(seed, beta)?;
    while row.level < level {
        row = row.step();
        limits.check_row(&row)?;
    }
    Ok(row)
}

/// Summary of the row at `level` alone.
pub fn level_summary<V: Value>(
    seed: &SeedPair<V>,
    beta: V,
    level: u32,
    limits: &EnumerationLimits,
) -> Result<RowSummary<V>> {
    limits.check_level(level)?;
    if let Some((seed, beta)) = exact_args(seed, &beta) {
        check_beta(beta)?;
        let mut row = ScaledRow::root(seed, beta.clone());
        for _ in 0..level {
            row = row.step();
            row.check(limits)?;
        }
        return Ok(cast(row.stats()));
    }
    Ok(build_row(seed, beta, level, limits)?.stats())
}

/// Summaries for levels `0..=n_max`.
///
/// Exact mode is `V = Rational`; float mode is `V = ScaledFloat`.
pub fn enumerate<V: Value>(
    seed: &SeedPair<V>,
    beta: V,
    n_max: u32,
    limits: &EnumerationLimits,
) -> Result<Vec<RowSummary<V>>> {
    limits.check_level(n_max)?;
    if let Some((seed, beta)) = exact_args(seed, &beta) {
        check_beta(beta)?;
        let mut row = ScaledRow::root(seed, beta.clone());
        let mut out = vec![row.stats()];
        for _ in 0..n_max {
            row = row.step();
            row.check(limits)?;
            out.push(row.stats());
        }
        return Ok(cast(out));
    }
    let mut row = root_row(seed, beta)?;
    let mut out = Vec::with_capacity(n_max as usize + 1);
    out.push(row.stats());
    while row.level < n_max {
        row = row.step();
        limits.check_row(&row)?;
        out.push(row.stats());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Rational, ScaledFloat};

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn int(n: i64) -> Rational {
        q(n, 1)
    }

    fn seed(a: i64, b: i64) -> SeedPair<Rational> {
        SeedPair::new(int(a), int(b)).unwrap()
    }

    fn keys(row: &AggregatedRow<Rational>) -> Vec<(Rational, Rational, u64)> {
        row.states()
            .iter()
            .map(|s| {
                let k: u64 = s.count.clone().try_into().unwrap();
                (s.prev.clone(), s.curr.clone(), k)
            })
            .collect()
    }

    #[test]
    fn root_row_holds_the_seed() {
        for (a, b) in [(1, 1), (0, 1), (1, 0)] {
            let row = root_row(&seed(a, b), int(1)).unwrap();
            assert_eq!(row.level(), 0);
            assert_eq!(keys(&row), vec![(int(a), int(b), 1)]);
        }
    }

    #[test]
    fn zero_seed_is_rejected() {
        assert!(matches!(SeedPair::new(int(0), int(0)), Err(Error::ZeroSeed)));
        assert!(SeedPair::new(int(-1), int(1)).is_err());
        assert!(root_row(&seed(1, 1), int(0)).is_err());
    }

    #[test]
    fn step_examples() {
        let r1 = root_row(&seed(1, 1), int(1)).unwrap().step();
        assert_eq!(keys(&r1), vec![(int(1), int(0), 1), (int(1), int(2), 1)]);
        let r2 = r1.step();
        assert_eq!(
            keys(&r2),
            vec![(int(0), int(1), 2), (int(2), int(1), 1), (int(2), int(3), 1)]
        );
        let half = root_row(&seed(1, 1), q(1, 2)).unwrap().step();
        assert_eq!(keys(&half), vec![(int(1), q(1, 2), 1), (int(1), q(3, 2), 1)]);
    }

    #[test]
    fn zero_current_spawns_two_equal_children() {
        let row = root_row(&seed(1, 0), int(1)).unwrap().step();
        assert_eq!(keys(&row), vec![(int(0), int(1), 2)]);
    }

    #[test]
    fn stats_examples() {
        let rows = enumerate(&seed(1, 1), int(1), 3, &EnumerationLimits::default()).unwrap();
        let expected = [
            (1, 1, int(1), int(1)),
            (2, 4, int(1), int(2)),
            (6, 12, q(3, 2), int(3)),
            (14, 40, q(7, 4), int(5)),
        ];
        for (row, (s, ss, mean, raw)) in rows.iter().zip(expected) {
            assert_eq!(row.sum, int(s));
            assert_eq!(row.sum_sq, int(ss));
            assert_eq!(row.mean_abs, mean);
            assert_eq!(row.raw_second, raw);
            assert_eq!(row.variance, &raw - &mean * &mean);
        }
    }

    #[test]
    fn level_cap_is_enforced() {
        let err = enumerate(&seed(1, 1), int(1), 40, &EnumerationLimits::default()).unwrap_err();
        assert!(err.is_resource_guard());
        let tight = EnumerationLimits {
            max_level: 30,
            max_states: 10,
        };
        let err = enumerate(&seed(1, 1), int(1), 20, &tight).unwrap_err();
        assert!(matches!(err, Error::StateBudget { .. }));
    }

    #[test]
    fn float_mode_matches_exact_for_integer_tree() {
        let limits = EnumerationLimits::default();
        let exact = enumerate(&seed(1, 1), int(1), 16, &limits).unwrap();
        let float = enumerate(&SeedPair::unit(), ScaledFloat::ONE, 16, &limits).unwrap();
        for (e, f) in exact.iter().zip(&float) {
            assert_eq!(e.sum.to_f64(), f.sum.to_f64());
            assert_eq!(e.sum_sq.to_f64(), f.sum_sq.to_f64());
        }
    }

    #[test]
    fn large_rows_use_the_parallel_path_consistently() {
        let limits = EnumerationLimits::default();
        let row = build_row(&seed(1, 1), q(1, 3), 14, &limits).unwrap();
        assert!(row.len() >= PARALLEL_THRESHOLD);
        let next = row.step();
        assert_eq!(next.total_count(), BigUint::one() << 15u32);
        let mut serial = StateMap::new();
        expand_into(&mut serial, row.states(), row.beta());
        assert_eq!(serial.len(), next.len());
        for s in next.states() {
            assert_eq!(serial[&Key(s.prev.clone(), s.curr.clone())], s.count);
        }
    }

    #[test]
    fn integer_path_matches_rational_steps() {
        let limits = EnumerationLimits::default();
        let seeds = [seed(1, 1), seed(0, 1), SeedPair::new(q(3, 2), q(2, 5)).unwrap()];
        for sp in &seeds {
            for beta in [int(1), q(1, 2), q(7, 3), q(5, 7)] {
                let mut generic = root_row(sp, beta.clone()).unwrap();
                let summaries = enumerate(sp, beta.clone(), 9, &limits).unwrap();
                for n in 0..=9 {
                    assert_eq!(build_row(sp, beta.clone(), n, &limits).unwrap(), generic);
                    assert_eq!(summaries[n as usize], generic.stats());
                    assert_eq!(level_summary(sp, beta.clone(), n, &limits).unwrap(), generic.stats());
                    generic = generic.step();
                }
            }
        }
    }
}
