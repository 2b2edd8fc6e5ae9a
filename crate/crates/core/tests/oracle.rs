mod common;

use common::{half_tree_leaves, int, lemma_leaves, naive_histogram, naive_row, naive_sums, q};
use num_bigint::BigUint;
use num_traits::{Signed, ToPrimitive, Zero};
use proptest::prelude::*;
use randfib::beta_cases::{case_report, HalfTree};
use randfib::bounds::lemma1_check;
use randfib::tree::{build_row, enumerate, EnumerationLimits, SeedPair};
use randfib::{Rational, ScaledFloat};

fn histogram(row: &randfib::tree::AggregatedRow<Rational>) -> Vec<((Rational, Rational), u64)> {
    row.states()
        .iter()
        .map(|s| ((s.prev.clone(), s.curr.clone()), s.count.to_u64().unwrap()))
        .collect()
}

fn assert_matches_naive(x0: Rational, x1: Rational, beta: Rational, n: u32) {
    let seed = SeedPair::new(x0.clone(), x1.clone()).unwrap();
    let limits = EnumerationLimits::default();
    let row = build_row(&seed, beta.clone(), n, &limits).unwrap();
    let naive = naive_row(&x0, &x1, &beta, n);
    let expected: Vec<_> = naive_histogram(&naive).into_iter().collect();
    assert_eq!(histogram(&row), expected, "seed ({x0}, {x1}), β = {beta}, n = {n}");
    assert_eq!(row.total_count(), BigUint::from(1u8) << n);

    let stats = row.stats();
    let (s, ss) = naive_sums(&naive);
    assert_eq!((stats.sum, stats.sum_sq), (s, ss));
}

#[test]
fn aggregated_rows_equal_naive_paths() {
    for (x0, x1) in [(int(1), int(1)), (int(0), int(1)), (q(3, 2), q(2, 5))] {
        for beta in [int(1), q(1, 2), int(2), q(7, 10)] {
            for n in 0..=10 {
                assert_matches_naive(x0.clone(), x1.clone(), beta.clone(), n);
            }
        }
    }
}

#[test]
fn float_rows_track_exact_rows() {
    let limits = EnumerationLimits::default();
    let exact = enumerate(&SeedPair::<Rational>::unit(), q(7, 10), 18, &limits).unwrap();
    let float = enumerate(&SeedPair::<ScaledFloat>::unit(), ScaledFloat::from_f64(0.7), 18, &limits).unwrap();
    for (e, f) in exact.iter().zip(&float) {
        let want = e.mean_abs.to_f64().unwrap();
        let got = randfib::Value::to_f64(&f.mean_abs);
        assert!((want - got).abs() <= 1e-9 * want, "level {}: {want} vs {got}", e.level);
    }
}

#[test]
fn exact_enumeration_is_deterministic() {
    let limits = EnumerationLimits::default();
    let a = enumerate(&SeedPair::<Rational>::unit(), q(5, 7), 16, &limits).unwrap();
    let b = enumerate(&SeedPair::<Rational>::unit(), q(5, 7), 16, &limits).unwrap();
    assert_eq!(a, b);
}

#[test]
fn lemma1_on_tree_nodes() {
    // every interior node of the β = 1 tree with its actual children
    let limits = EnumerationLimits::default();
    for n in 1..=8 {
        let row = build_row(&SeedPair::<Rational>::unit(), int(1), n, &limits).unwrap();
        for s in row.states() {
            let (p, a) = (&s.prev, &s.curr);
            let (b1, b2) = (p + a, (p - a).abs());
            let c = lemma1_check(a, &b1, &b2).unwrap();
            let leaves = lemma_leaves(a, &b1, &b2);
            let direct = leaves.iter().fold(Rational::zero(), |acc, x| acc + x);
            assert_eq!(c.subtree.sigma, direct);
            assert!(c.holds);
        }
    }
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (0i64..500, 1i64..60).prop_map(|(n, d)| q(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn random_seeds_and_betas_match_naive(
        x0 in 0i64..20,
        x1 in 0i64..20,
        bn in 1i64..40,
        bd in 1i64..20,
        n in 0u32..9,
    ) {
        prop_assume!(x0 != 0 || x1 != 0);
        assert_matches_naive(int(x0), int(x1), q(bn, bd), n);
    }

    #[test]
    fn lemma1_sigma_matches_direct_expansion(a in small_rational(), extra in small_rational(), b2 in small_rational()) {
        let b1 = &a + &extra;
        let c = lemma1_check(&a, &b1, &b2).unwrap();
        let direct = lemma_leaves(&a, &b1, &b2).into_iter().fold(Rational::zero(), |acc, x| acc + x);
        prop_assert_eq!(&c.subtree.sigma, &direct);
        prop_assert_eq!(&c.subtree.sigma_enumerated, &direct);
        prop_assert!(c.lower_bound <= direct && direct <= c.upper_bound);
    }

    #[test]
    fn half_tree_matches_direct_expansion(
        a in small_rational(),
        b in small_rational(),
        beta in (1i64..300, 1i64..100),
    ) {
        prop_assume!(!(a.is_zero() && b.is_zero()));
        let beta = q(beta.0, beta.1);
        let direct = half_tree_leaves(&a, &b, &beta).into_iter().fold(Rational::zero(), |acc, x| acc + x);
        prop_assert_eq!(HalfTree::new(&a, &b, &beta).unwrap().bottom_sum(), direct.clone());
        let r = case_report(&a, &b, &beta).unwrap();
        prop_assert_eq!(r.brute_sum, direct.clone());
        prop_assert_eq!(r.eq_derived_sum, direct);
    }
}
