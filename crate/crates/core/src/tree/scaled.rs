//! Exact rows in integer form.
//!
//! With β = u/v and the seed over a common denominator d, every value at level
//! k times d·v^k is a nonnegative integer. A step maps `(P, C)` to
//! `(vC, |vP ± uC|)` with no gcds, and equal values at one level are equal
//! integers, so states merge exactly as the rationals would.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::One;
use rayon::prelude::*;

use super::{merge_count, AggregatedRow, EnumerationLimits, NodeState, RowSummary, SeedPair, PARALLEL_THRESHOLD};
use crate::error::{Error, Result};
use crate::scalar::{Rational, Value};

type ScaledMap = HashMap<(BigUint, BigUint), BigUint>;

pub(super) struct ScaledRow {
    level: u32,
    beta: Rational,
    u: BigUint,
    v: BigUint,
    /// `d·v^level`.
    scale: BigUint,
    /// `(P, C, count)` sorted by `(P, C)`, which is the order of `(P, C) / scale`.
    states: Vec<(BigUint, BigUint, BigUint)>,
}

fn magnitude(x: &BigInt) -> BigUint {
    x.magnitude().clone()
}

fn expand_into(map: &mut ScaledMap, states: &[(BigUint, BigUint, BigUint)], u: &BigUint, v: &BigUint) {
    for (p, c, count) in states {
        let scaled = u * c;
        let vp = v * p;
        let next_prev = v * c;
        let diff = if vp >= scaled { &vp - &scaled } else { &scaled - &vp };
        let sum = vp + scaled;
        merge_count(map.entry((next_prev.clone(), diff)).or_default(), count);
        merge_count(map.entry((next_prev, sum)).or_default(), count);
    }
}

fn merge_maps(mut a: ScaledMap, b: ScaledMap) -> ScaledMap {
    if a.len() < b.len() {
        return merge_maps(b, a);
    }
    for (key, count) in b {
        merge_count(a.entry(key).or_default(), &count);
    }
    a
}

impl ScaledRow {
    /// Row 0. The seed and β are already validated.
    pub(super) fn root(seed: &SeedPair<Rational>, beta: Rational) -> Self {
        let d = seed.x0.denom().lcm(seed.x1.denom());
        let lift = |x: &Rational| magnitude(&(x.numer() * (&d / x.denom())));
        ScaledRow {
            level: 0,
            u: magnitude(beta.numer()),
            v: magnitude(beta.denom()),
            scale: magnitude(&d),
            states: vec![(lift(&seed.x0), lift(&seed.x1), BigUint::one())],
            beta,
        }
    }

    pub(super) fn step(&self) -> Self {
        let (u, v) = (&self.u, &self.v);
        let map = if self.states.len() < PARALLEL_THRESHOLD {
            let mut map = ScaledMap::with_capacity(self.states.len() * 2);
            expand_into(&mut map, &self.states, u, v);
            map
        } else {
            self.states
                .par_chunks(PARALLEL_THRESHOLD)
                .map(|chunk| {
                    let mut map = ScaledMap::with_capacity(chunk.len() * 2);
                    expand_into(&mut map, chunk, u, v);
                    map
                })
                .reduce(ScaledMap::new, merge_maps)
        };
        let mut states: Vec<_> = map.into_iter().map(|((p, c), k)| (p, c, k)).collect();
        states.par_sort_unstable_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
        ScaledRow {
            level: self.level + 1,
            beta: self.beta.clone(),
            u: self.u.clone(),
            v: self.v.clone(),
            scale: &self.scale * v,
            states,
        }
    }

    pub(super) fn check(&self, limits: &EnumerationLimits) -> Result<()> {
        if self.states.len() > limits.max_states {
            return Err(Error::StateBudget {
                level: self.level,
                states: self.states.len(),
                budget: limits.max_states,
            });
        }
        Ok(())
    }

    /// Same values as [`AggregatedRow::stats`], from two integer sums.
    pub(super) fn stats(&self) -> RowSummary<Rational> {
        let mut sum = BigUint::default();
        let mut sum_sq = BigUint::default();
        for (_, c, k) in &self.states {
            let weighted = c * k;
            sum_sq += &weighted * c;
            sum += weighted;
        }
        let scale = BigInt::from(self.scale.clone());
        let sum = Rational::new(sum.into(), scale.clone());
        let sum_sq = Rational::new(sum_sq.into(), &scale * &scale);
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

    pub(super) fn into_row(self) -> AggregatedRow<Rational> {
        let scale = BigInt::from(self.scale);
        let states = self
            .states
            .into_iter()
            .map(|(p, c, count)| NodeState {
                prev: Rational::new(p.into(), scale.clone()),
                curr: Rational::new(c.into(), scale.clone()),
                count,
            })
            .collect();
        AggregatedRow {
            level: self.level,
            beta: self.beta,
            states,
        }
    }
}
