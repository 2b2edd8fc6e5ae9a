//! Brute-force reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use randfib::Rational;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn int(n: i64) -> Rational {
    q(n, 1)
}

/// Every signed path of length `n` from `(x0, x1)`, with no aggregation or
/// absolute values: `2^n` pairs `(x[n], x[n+1])`.
pub fn naive_row(x0: &Rational, x1: &Rational, beta: &Rational, n: u32) -> Vec<(Rational, Rational)> {
    let mut row = vec![(x0.clone(), x1.clone())];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() * 2);
        for (prev, curr) in &row {
            next.push((curr.clone(), prev + beta * curr));
            next.push((curr.clone(), prev - beta * curr));
        }
        row = next;
    }
    row
}

/// `(Σ|x|, Σx²)` over the last entries of a naive row.
pub fn naive_sums(row: &[(Rational, Rational)]) -> (Rational, Rational) {
    row.iter().fold((Rational::zero(), Rational::zero()), |(s, ss), (_, x)| {
        (s + x.abs(), ss + x * x)
    })
}

/// Multiset of `(|prev|, |curr|)` pairs.
pub fn naive_histogram(row: &[(Rational, Rational)]) -> BTreeMap<(Rational, Rational), u64> {
    let mut h = BTreeMap::new();
    for (p, c) in row {
        *h.entry((p.abs(), c.abs())).or_insert(0) += 1;
    }
    h
}

/// The eight leaves two levels below the states `(a, b1)` and `(a, b2)`, by
/// direct expansion of the β = 1 recurrence.
pub fn lemma_leaves(a: &Rational, b1: &Rational, b2: &Rational) -> Vec<Rational> {
    let mut level = vec![(a.clone(), b1.clone()), (a.clone(), b2.clone())];
    for _ in 0..2 {
        level = level
            .iter()
            .flat_map(|(x, y)| [(y.clone(), (x - y).abs()), (y.clone(), x + y)])
            .collect();
    }
    level.into_iter().map(|(_, y)| y).collect()
}

/// The four grandchildren of `b` in the β-scaled tree, node `(a, b)`.
pub fn half_tree_leaves(a: &Rational, b: &Rational, beta: &Rational) -> Vec<Rational> {
    let children = [(a - beta * b).abs(), a + beta * b];
    children
        .iter()
        .flat_map(|c| [(b - beta * c).abs(), b + beta * c])
        .collect()
}

/// Exact Newton interpolation through `(xs[i], ys[i])`, evaluated at `x`.
pub fn interpolate(xs: &[Rational], ys: &[Rational], x: &Rational) -> Rational {
    let n = xs.len();
    let mut coef = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            coef[i] = (&coef[i] - &coef[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut acc = coef[n - 1].clone();
    for i in (0..n - 1).rev() {
        acc = acc * (x - &xs[i]) + &coef[i];
    }
    acc
}
