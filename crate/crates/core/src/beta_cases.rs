//! The β-scaled half-tree below a node and its six sign cases.
//!
//! For a node `b` with parent `a`, the children are `c = |a - βb|` and
//! `d = a + βb`, and the four grandchildren are `|b - βc|`, `b + βc`,
//! `|b - βd|`, `b + βd`. Their sum is
//!
//! ```text
//! β(c + d) + 2b + |b - βc| + |b - βd|
//! ```
//!
//! and the two remaining absolute values resolve into one of six linear forms
//! depending on where `(a, b)` sits relative to the lines `βb = a`,
//! `βa + β²b = b`, `β²b = b + βa` and `βa = β²b + b`.
//!
//! Conditions are compared exactly as printed in the published case table
//! (`≥` against `<`, strict `>` in cases 2 and 5). Cases 2 and 5 are tested
//! before cases 1 and 4, whose printed conditions they imply. Adjacent forms
//! agree on the boundary lines, so the routing never changes a sum.
//!
//! The published table misprints the sums of cases 2 and 6 (each is off by
//! `2b`); [`case_sum_formulas`] returns both the printed and the derived form
//! so the discrepancy stays visible.

use std::cmp::Ordering;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{Rational, Value};

/// Bit width below which the witness search runs in `i128`.
const FAST_PATH_BITS: u64 = 40;
/// Random `(a, b)` samples are drawn from `[0, 2^SAMPLE_BITS]`.
const SAMPLE_BITS: u32 = 32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfTree {
    pub a: Rational,
    pub b: Rational,
    pub beta: Rational,
    pub c: Rational,
    pub d: Rational,
    pub bottom: [Rational; 4],
}

impl HalfTree {
    pub fn new(a: &Rational, b: &Rational, beta: &Rational) -> Result<Self> {
        check_inputs(a, b, beta)?;
        let c = a.abs_diff(&(beta * b));
        let d = a + beta * b;
        let bc = beta * &c;
        let bd = beta * &d;
        let bottom = [b.abs_diff(&bc), b + &bc, b.abs_diff(&bd), b + &bd];
        Ok(HalfTree {
            a: a.clone(),
            b: b.clone(),
            beta: beta.clone(),
            c,
            d,
            bottom,
        })
    }

    pub fn bottom_sum(&self) -> Rational {
        self.bottom.iter().fold(Rational::zero(), |acc, x| acc + x)
    }
}

fn check_inputs(a: &Rational, b: &Rational, beta: &Rational) -> Result<()> {
    if a.is_negative() {
        return Err(Error::out_of_range("a", "nonnegative", a));
    }
    if b.is_negative() {
        return Err(Error::out_of_range("b", "nonnegative", b));
    }
    if !beta.is_positive() {
        return Err(Error::out_of_range("beta", "positive", beta));
    }
    Ok(())
}

/// Brute-force sum of the four grandchildren of `b`.
pub fn half_tree_bottom_sum(a: &Rational, b: &Rational, beta: &Rational) -> Result<Rational> {
    Ok(HalfTree::new(a, b, beta)?.bottom_sum())
}

/// One row of the case table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(into = "u8")]
pub enum CaseId {
    One = 1,
    Two,
    Three,
    Four,
    Five,
    Six,
}

impl From<CaseId> for u8 {
    fn from(c: CaseId) -> u8 {
        c as u8
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", *self as u8)
    }
}

impl CaseId {
    pub const ALL: [CaseId; 6] = [
        CaseId::One,
        CaseId::Two,
        CaseId::Three,
        CaseId::Four,
        CaseId::Five,
        CaseId::Six,
    ];

    pub fn from_number(n: u8) -> Option<CaseId> {
        Self::ALL.get(usize::from(n).checked_sub(1)?).copied()
    }

    pub fn number(self) -> u8 {
        self as u8
    }

    pub fn conditions(self) -> &'static str {
        match self {
            CaseId::One => "βb ≥ a, βa + β²b ≥ b",
            CaseId::Two => "βb ≥ a, β²b > b + βa",
            CaseId::Three => "βb ≥ a, βa + β²b < b",
            CaseId::Four => "βb < a, βa + β²b ≥ b",
            CaseId::Five => "βb < a, βa > β²b + b",
            CaseId::Six => "βb < a, βa + β²b < b",
        }
    }

    /// Restriction column as printed.
    pub fn restriction(self) -> &'static str {
        match self {
            CaseId::One => "β² > 1/2",
            CaseId::Two => "β > 1",
            CaseId::Three => "β < 1",
            CaseId::Four => "none",
            CaseId::Five => "b = 0",
            CaseId::Six => "β² < 1/2",
        }
    }

    /// Sum column as printed (case 3 read as `(4 - 2β²)b`).
    pub fn printed_sum(self) -> &'static str {
        match self {
            CaseId::One => "β(c + d) + 2b + 2βa",
            CaseId::Two => "β(c + d) + (2 + 2β²)b",
            CaseId::Three => "β(c + d) + (4 - 2β²)b",
            CaseId::Four => "β(c + d) + (2 + 2β²)b",
            CaseId::Five => "β(c + d) + 2βa",
            CaseId::Six => "β(c + d) + 2b - 2βa",
        }
    }

    /// Sum obtained by resolving the absolute values under the case's conditions.
    pub fn derived_sum(self) -> &'static str {
        match self {
            CaseId::One => "β(c + d) + 2b + 2βa",
            CaseId::Two => "β(c + d) + 2β²b",
            CaseId::Three => "β(c + d) + (4 - 2β²)b",
            CaseId::Four => "β(c + d) + (2 + 2β²)b",
            CaseId::Five => "β(c + d) + 2βa",
            CaseId::Six => "β(c + d) + 4b - 2βa",
        }
    }

    /// Whether some `(a, b) ≥ 0`, not both zero, falls in this case.
    ///
    /// Closed-form answer used to cross-check the witness search.
    pub fn admits(self, beta: &Rational) -> bool {
        let beta_sq = beta * beta;
        let half = Rational::new(1.into(), 2.into());
        match self {
            CaseId::One => beta_sq >= half,
            CaseId::Two => beta > &Rational::one(),
            CaseId::Three => beta < &Rational::one(),
            CaseId::Four | CaseId::Five => true,
            CaseId::Six => beta_sq < half,
        }
    }
}

/// Routes the sign pattern of the four boundary comparisons to a case.
///
/// * `high`: `βb ≥ a`
/// * `sum_vs_b`: `βa + β²b` against `b`
/// * `sq_vs_rest`: `β²b` against `b + βa`
/// * `lin_vs_rest`: `βa` against `β²b + b`
fn route(high: bool, sum_vs_b: Ordering, sq_vs_rest: Ordering, lin_vs_rest: Ordering) -> CaseId {
    if high {
        if sq_vs_rest == Ordering::Greater {
            CaseId::Two
        } else if sum_vs_b != Ordering::Less {
            CaseId::One
        } else {
            CaseId::Three
        }
    } else if lin_vs_rest == Ordering::Greater {
        CaseId::Five
    } else if sum_vs_b != Ordering::Less {
        CaseId::Four
    } else {
        CaseId::Six
    }
}

pub fn classify_case(a: &Rational, b: &Rational, beta: &Rational) -> Result<CaseId> {
    check_inputs(a, b, beta)?;
    if a.is_zero() && b.is_zero() {
        return Err(Error::Precondition("a and b are both zero".into()));
    }
    let beta_b = beta * b;
    let beta_a = beta * a;
    let beta_sq_b = beta * &beta_b;
    Ok(route(
        beta_b >= *a,
        (&beta_a + &beta_sq_b).cmp(b),
        beta_sq_b.cmp(&(b + &beta_a)),
        beta_a.cmp(&(&beta_sq_b + b)),
    ))
}

/// Classification for integer `(a, b)` and `β = p/q` with `q > 0`.
///
/// Every condition is homogeneous in `(a, b)`, so rational inputs can be
/// scaled to integers; multiplying through by `q²` keeps the arithmetic integral.
fn classify_scaled<T>(a: &T, b: &T, p: &T, q: &T) -> CaseId
where
    T: Ord,
    for<'x> &'x T: Mul<&'x T, Output = T> + Add<&'x T, Output = T>,
{
    let pq_a = &(p * q) * a;
    let pp_b = &(p * p) * b;
    let qq_b = &(q * q) * b;
    route(
        p * b >= q * a,
        (&pq_a + &pp_b).cmp(&qq_b),
        pp_b.cmp(&(&qq_b + &pq_a)),
        pq_a.cmp(&(&pp_b + &qq_b)),
    )
}

/// Both sum forms for a case, evaluated at a point that falls in that case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseSums {
    pub eq_derived: Rational,
    pub table_printed: Rational,
}

pub fn case_sum_formulas(
    case: CaseId,
    a: &Rational,
    b: &Rational,
    c: &Rational,
    d: &Rational,
    beta: &Rational,
) -> Result<CaseSums> {
    let actual = classify_case(a, b, beta)?;
    if actual != case {
        return Err(Error::Precondition(format!(
            "(a, b, β) = ({a}, {b}, {beta}) falls in case {actual}, not case {case}"
        )));
    }
    if *c != a.abs_diff(&(beta * b)) || *d != a + beta * b {
        return Err(Error::Precondition(format!(
            "c = {c}, d = {d} are not the children |a - βb|, a + βb"
        )));
    }
    let two = Rational::from_integer(2.into());
    let four = Rational::from_integer(4.into());
    let base = beta * (c + d);
    let beta_sq = beta * beta;
    let two_b = &two * b;
    let two_beta_a = &two * beta * a;
    let two_beta_sq_b = &two * &beta_sq * b;

    let (eq_derived, table_printed) = match case {
        CaseId::One => {
            let s = &base + &two_b + &two_beta_a;
            (s.clone(), s)
        }
        CaseId::Two => (&base + &two_beta_sq_b, &base + &two_b + &two_beta_sq_b),
        CaseId::Three => {
            let s = &base + (&four - &two * &beta_sq) * b;
            (s.clone(), s)
        }
        CaseId::Four => {
            let s = &base + &two_b + &two_beta_sq_b;
            (s.clone(), s)
        }
        CaseId::Five => {
            let s = &base + &two_beta_a;
            (s.clone(), s)
        }
        CaseId::Six => (
            &base + &four * b - &two_beta_a,
            &base + &two_b - &two_beta_a,
        ),
    };
    Ok(CaseSums {
        eq_derived,
        table_printed,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseReport {
    pub case: CaseId,
    pub brute_sum: Rational,
    pub eq_derived_sum: Rational,
    pub table_printed_sum: Rational,
    pub agree_eq: bool,
    pub agree_table: bool,
}

/// Classifies `(a, b, β)` and compares both sum forms with brute force.
pub fn case_report(a: &Rational, b: &Rational, beta: &Rational) -> Result<CaseReport> {
    let tree = HalfTree::new(a, b, beta)?;
    let case = classify_case(a, b, beta)?;
    let sums = case_sum_formulas(case, a, b, &tree.c, &tree.d, beta)?;
    let brute_sum = tree.bottom_sum();
    Ok(CaseReport {
        case,
        agree_eq: sums.eq_derived == brute_sum,
        agree_table: sums.table_printed == brute_sum,
        brute_sum,
        eq_derived_sum: sums.eq_derived,
        table_printed_sum: sums.table_printed,
    })
}

/// Outcome of a witness search for one case at one β.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Satisfiability {
    pub case: CaseId,
    pub beta: Rational,
    pub satisfiable: bool,
    pub witness: Option<(Rational, Rational)>,
    /// Points classified before the search stopped.
    pub samples_checked: u64,
}

fn small_grid() -> Vec<(i64, i64)> {
    let mut grid: Vec<(i64, i64)> = (0..=4)
        .flat_map(|a| (0..=4).map(move |b| (a, b)))
        .filter(|&p| p != (0, 0))
        .collect();
    grid.sort_by_key(|&(a, b)| (a.max(b), (a - b).abs(), a));
    grid
}

/// Ratios `a/b` at which some condition flips, plus the points between and
/// beyond them. Since the case depends only on the direction of `(a, b)`, one
/// point per cell of this partition (and `b = 0`) covers every case that occurs.
fn boundary_points(beta: &Rational) -> Vec<(Rational, Rational)> {
    let one = Rational::one();
    let beta_sq = beta * beta;
    let mut ratios = vec![
        Rational::zero(),
        beta.clone(),
        (&one - &beta_sq) / beta,
        (&beta_sq - &one) / beta,
        (&one + &beta_sq) / beta,
    ];
    ratios.retain(|r| !r.is_negative());
    ratios.sort();
    ratios.dedup();
    let two = Rational::from_integer(2.into());
    let mut points: Vec<Rational> = ratios.clone();
    points.extend(ratios.windows(2).map(|w| (&w[0] + &w[1]) / &two));
    let last = ratios.last().expect("zero is always present").clone();
    points.push(&last + &one);
    points.push(&last * &two + &one);
    let mut out: Vec<(Rational, Rational)> = points.into_iter().map(|r| (r, one.clone())).collect();
    out.push((one, Rational::zero()));
    out
}

fn draw_point(rng: &mut ChaCha8Rng) -> (u64, u64) {
    let top = 1u64 << SAMPLE_BITS;
    match rng.random_range(0..4u8) {
        // occasional axis points
        0 if rng.random_bool(0.05) => (rng.random_range(1..=top), 0),
        0 | 1 => (rng.random_range(0..=top), rng.random_range(1..=top)),
        // ratio a/b uniform on [0, 4): covers every boundary line for β up to ~4
        _ => {
            let b = rng.random_range(1..=top);
            let k = rng.random_range(0..(4u64 << SAMPLE_BITS));
            let a = ((u128::from(b) * u128::from(k)) >> SAMPLE_BITS) as u64;
            (a, b)
        }
    }
}

/// Searches for `(a, b) ≥ 0` falling in `case` at `beta`.
///
/// A fixed small-integer grid and the boundary cells are checked first (exact
/// rationals), then `trials` random integer points drawn from a stream seeded
/// by `rng_seed`. All classification is exact, so a reported witness always
/// satisfies the case's conditions.
pub fn case_restriction_satisfiable(
    case: CaseId,
    beta: &Rational,
    trials: u64,
    rng_seed: u64,
) -> Result<Satisfiability> {
    if !beta.is_positive() {
        return Err(Error::out_of_range("beta", "positive", beta));
    }
    let mut checked = 0u64;
    let found = |a: Rational, b: Rational, checked: u64| Satisfiability {
        case,
        beta: beta.clone(),
        satisfiable: true,
        witness: Some((a, b)),
        samples_checked: checked,
    };

    let deterministic = small_grid()
        .into_iter()
        .map(|(a, b)| (Rational::from_integer(a.into()), Rational::from_integer(b.into())))
        .chain(boundary_points(beta));
    for (a, b) in deterministic {
        checked += 1;
        if classify_case(&a, &b, beta)? == case {
            return Ok(found(a, b, checked));
        }
    }

    let (p, q) = (beta.numer().clone(), beta.denom().clone());
    let fast = p.bits().max(q.bits()) <= FAST_PATH_BITS;
    let (p_small, q_small) = if fast {
        (i128::try_from(&p).unwrap(), i128::try_from(&q).unwrap())
    } else {
        (0, 0)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    for _ in 0..trials {
        let (a, b) = draw_point(&mut rng);
        checked += 1;
        let hit = if fast {
            classify_scaled(&i128::from(a), &i128::from(b), &p_small, &q_small)
        } else {
            classify_scaled(&BigInt::from(a), &BigInt::from(b), &p, &q)
        } == case;
        if hit {
            let (a, b) = (Rational::from_integer(a.into()), Rational::from_integer(b.into()));
            return Ok(found(a, b, checked));
        }
    }
    Ok(Satisfiability {
        case,
        beta: beta.clone(),
        satisfiable: false,
        witness: None,
        samples_checked: checked,
    })
}

/// `1/√2`: below it case 6, the only form that subtracts a multiple of `a`,
/// becomes reachable. [`critical_check`] confirms this by search.
pub fn critical_beta() -> f64 {
    FRAC_1_SQRT_2
}

/// Case-6 witness searches on both sides of the critical value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalCheck {
    pub below: Satisfiability,
    pub above: Satisfiability,
}

impl CriticalCheck {
    /// Case 6 reachable below and unreachable above.
    pub fn confirms(&self) -> bool {
        self.below.satisfiable && !self.above.satisfiable
    }
}

pub fn critical_check(
    below: &Rational,
    above: &Rational,
    trials: u64,
    rng_seed: u64,
) -> Result<CriticalCheck> {
    Ok(CriticalCheck {
        below: case_restriction_satisfiable(CaseId::Six, below, trials, rng_seed)?,
        above: case_restriction_satisfiable(CaseId::Six, above, trials, rng_seed)?,
    })
}

/// One line of the case-table audit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditRow {
    pub case: CaseId,
    pub beta: String,
    pub conditions: &'static str,
    pub restriction: &'static str,
    pub printed_sum: &'static str,
    pub derived_sum: &'static str,
    pub satisfiable: bool,
    pub witness_a: Option<String>,
    pub witness_b: Option<String>,
    pub brute_sum: Option<String>,
    pub eq_derived_sum: Option<String>,
    pub table_printed_sum: Option<String>,
    pub agree_eq: Option<bool>,
    pub agree_table: Option<bool>,
    /// `match`, `mismatch` (printed sum differs from brute force) or `unsatisfiable`.
    pub verdict: &'static str,
    pub note: Option<String>,
}

/// `b = 1` with `a` just above `(1 + β²)/β`, which satisfies both case-5 conditions.
fn positive_b_case5_witness(beta: &Rational) -> Result<Option<(Rational, Rational)>> {
    let b = Rational::one();
    let a = ((&b + beta * beta) / beta).floor() + Rational::one();
    Ok((classify_case(&a, &b, beta)? == CaseId::Five).then_some((a, b)))
}

pub fn table_audit(beta: &Rational, trials: u64, rng_seed: u64) -> Result<Vec<AuditRow>> {
    CaseId::ALL
        .iter()
        .map(|&case| {
            let sat = case_restriction_satisfiable(case, beta, trials, rng_seed)?;
            let mut row = AuditRow {
                case,
                beta: beta.to_string(),
                conditions: case.conditions(),
                restriction: case.restriction(),
                printed_sum: case.printed_sum(),
                derived_sum: case.derived_sum(),
                satisfiable: sat.satisfiable,
                witness_a: None,
                witness_b: None,
                brute_sum: None,
                eq_derived_sum: None,
                table_printed_sum: None,
                agree_eq: None,
                agree_table: None,
                verdict: "unsatisfiable",
                note: None,
            };
            if let Some((a, b)) = sat.witness {
                let report = case_report(&a, &b, beta)?;
                row.verdict = if report.agree_table { "match" } else { "mismatch" };
                if case == CaseId::Five {
                    row.note = positive_b_case5_witness(beta)?
                        .map(|(a, b)| format!("restriction b = 0 is not forced: (a, b) = ({a}, {b}) is also case 5"));
                }
                row.witness_a = Some(a.to_string());
                row.witness_b = Some(b.to_string());
                row.brute_sum = Some(report.brute_sum.to_string());
                row.eq_derived_sum = Some(report.eq_derived_sum.to_string());
                row.table_printed_sum = Some(report.table_printed_sum.to_string());
                row.agree_eq = Some(report.agree_eq);
                row.agree_table = Some(report.agree_table);
            }
            Ok(row)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn int(n: i64) -> Rational {
        q(n, 1)
    }

    #[test]
    fn bottom_sum_examples() {
        let t = HalfTree::new(&int(1), &int(2), &int(1)).unwrap();
        assert_eq!((t.c.clone(), t.d.clone()), (int(1), int(3)));
        assert_eq!(t.bottom.to_vec(), vec![int(1), int(3), int(1), int(5)]);
        assert_eq!(t.bottom_sum(), int(10));

        let t = HalfTree::new(&int(1), &int(1), &q(1, 2)).unwrap();
        assert_eq!(t.bottom.to_vec(), vec![q(3, 4), q(5, 4), q(1, 4), q(7, 4)]);
        assert_eq!(t.bottom_sum(), int(4));

        assert_eq!(half_tree_bottom_sum(&int(1), &int(0), &int(2)).unwrap(), int(8));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_case(&int(1), &int(2), &int(1)).unwrap(), CaseId::One);
        assert_eq!(classify_case(&int(1), &int(1), &q(1, 2)).unwrap(), CaseId::Six);
        assert_eq!(classify_case(&int(1), &int(1), &int(2)).unwrap(), CaseId::Two);
        assert!(classify_case(&int(0), &int(0), &int(1)).is_err());
        assert!(classify_case(&int(1), &int(1), &int(0)).is_err());
    }

    #[test]
    fn sum_formula_examples() {
        let s = case_sum_formulas(CaseId::One, &int(1), &int(2), &int(1), &int(3), &int(1)).unwrap();
        assert_eq!((s.eq_derived, s.table_printed), (int(10), int(10)));

        let t = HalfTree::new(&int(1), &int(1), &int(2)).unwrap();
        assert_eq!(t.bottom.to_vec(), vec![int(1), int(3), int(5), int(7)]);
        let s = case_sum_formulas(CaseId::Two, &int(1), &int(1), &t.c, &t.d, &int(2)).unwrap();
        assert_eq!((s.eq_derived, s.table_printed), (int(16), int(18)));

        let t = HalfTree::new(&int(1), &int(1), &q(1, 2)).unwrap();
        let s = case_sum_formulas(CaseId::Six, &int(1), &int(1), &t.c, &t.d, &q(1, 2)).unwrap();
        assert_eq!((s.eq_derived, s.table_printed), (int(4), int(2)));
    }

    #[test]
    fn sum_formulas_reject_wrong_case() {
        let t = HalfTree::new(&int(1), &int(2), &int(1)).unwrap();
        let err = case_sum_formulas(CaseId::Six, &int(1), &int(2), &t.c, &t.d, &int(1)).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
        let err = case_sum_formulas(CaseId::One, &int(1), &int(2), &int(9), &t.d, &int(1)).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn restriction_examples() {
        let s = case_restriction_satisfiable(CaseId::Six, &q(1, 2), 1000, 1).unwrap();
        assert!(s.satisfiable);
        assert_eq!(s.witness, Some((int(1), int(1))));
        assert!(!case_restriction_satisfiable(CaseId::Six, &q(71, 100), 10_000, 1).unwrap().satisfiable);
        assert!(!case_restriction_satisfiable(CaseId::Two, &q(9, 10), 10_000, 1).unwrap().satisfiable);
    }

    #[test]
    #[allow(clippy::approx_constant)] // the printed six-digit value is what is checked
    fn critical_value() {
        assert!((critical_beta() - 0.707107).abs() < 1e-6);
        let check = critical_check(&q(70, 100), &q(7071068, 10_000_000), 20_000, 3).unwrap();
        assert!(check.confirms());
    }

    #[test]
    fn search_agrees_with_closed_form_around_thresholds() {
        let thresholds = [q(7071, 10000), q(7072, 10000), int(1)];
        let offsets = [-50i64, -5, -1, 0, 1, 5, 50];
        for t in &thresholds {
            for off in offsets {
                let beta = t + q(off, 10_000);
                for case in CaseId::ALL {
                    let sat = case_restriction_satisfiable(case, &beta, 2_000, 11).unwrap();
                    assert_eq!(sat.satisfiable, case.admits(&beta), "case {case} at β = {beta}");
                }
            }
        }
    }

    #[test]
    fn big_rational_beta_uses_bigint_path() {
        let beta = Rational::new(
            BigInt::from(7071067811865475u64) * BigInt::from(1_000_000_007u64),
            BigInt::from(10_000_000_000_000_000u64) * BigInt::from(1_000_000_007u64) + 1,
        );
        let sat = case_restriction_satisfiable(CaseId::Six, &beta, 1000, 5).unwrap();
        assert_eq!(sat.satisfiable, CaseId::Six.admits(&beta));
    }

    #[test]
    fn audit_flags_misprinted_rows() {
        let audit = table_audit(&int(2), 1000, 0).unwrap();
        let row2 = &audit[1];
        assert_eq!(row2.verdict, "mismatch");
        assert_eq!(row2.witness_a.as_deref(), Some("1"));
        assert_eq!(row2.eq_derived_sum.as_deref(), Some("16"));
        assert_eq!(row2.table_printed_sum.as_deref(), Some("18"));

        let audit = table_audit(&q(1, 2), 1000, 0).unwrap();
        let row6 = &audit[5];
        assert_eq!(row6.verdict, "mismatch");
        assert_eq!(row6.eq_derived_sum.as_deref(), Some("4"));
        assert_eq!(row6.table_printed_sum.as_deref(), Some("2"));
        assert!(audit[4].note.is_some());

        let audit = table_audit(&q(71, 100), 1000, 0).unwrap();
        assert_eq!(audit[5].verdict, "unsatisfiable");
    }

    fn rational() -> impl Strategy<Value = Rational> {
        (0i64..2000, 1i64..200).prop_map(|(n, d)| q(n, d))
    }

    proptest! {
        #[test]
        fn derived_sum_is_exact(a in rational(), b in rational(), beta in (1i64..400, 1i64..200)) {
            prop_assume!(!(a.is_zero() && b.is_zero()));
            let beta = q(beta.0, beta.1);
            let r = case_report(&a, &b, &beta).unwrap();
            prop_assert!(r.agree_eq);
        }

        #[test]
        fn integer_and_rational_classifiers_agree(
            a in 0i64..100_000,
            b in 0i64..100_000,
            p in 1i64..5000,
            qd in 1i64..5000,
        ) {
            prop_assume!(a != 0 || b != 0);
            let beta = q(p, qd);
            let exact = classify_case(&int(a), &int(b), &beta).unwrap();
            let (p, qd) = (i128::try_from(beta.numer()).unwrap(), i128::try_from(beta.denom()).unwrap());
            prop_assert_eq!(classify_scaled(&i128::from(a), &i128::from(b), &p, &qd), exact);
        }
    }
}
