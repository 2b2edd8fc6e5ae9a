//! Polynomials with rational coefficients and Sturm-sequence root isolation.
//!
//! Only what the breakpoint search needs: evaluation, Euclidean remainder and
//! gcd, and isolation of positive real roots into disjoint rational intervals.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::Rational;

/// Coefficients lowest degree first; no trailing zeros (the zero polynomial is empty).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatPoly {
    coeffs: Vec<Rational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn add(&self, other: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Rational::zero();
        Self::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn neg(&self) -> RatPoly {
        RatPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &RatPoly) -> RatPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatPoly) -> RatPoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, k: &Rational) -> RatPoly {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn derivative(&self) -> RatPoly {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(i.into()))
                .collect(),
        )
    }

    /// Remainder of Euclidean division by a nonzero `divisor`.
    pub fn rem(&self, divisor: &RatPoly) -> RatPoly {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let dd = divisor.coeffs.len() - 1;
        let lead = &divisor.coeffs[dd];
        let mut r = self.coeffs.clone();
        while r.len() > dd {
            let shift = r.len() - 1 - dd;
            let factor = r.last().unwrap() / lead;
            for (i, c) in divisor.coeffs.iter().enumerate() {
                r[shift + i] -= &factor * c;
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        Self::new(r)
    }

    /// Divides out the leading coefficient.
    pub fn monic(&self) -> RatPoly {
        match self.coeffs.last() {
            None => Self::zero(),
            Some(lead) => self.scale(&(Rational::one() / lead)),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// `self / divisor` when the division is exact.
    pub fn div_exact(&self, divisor: &RatPoly) -> RatPoly {
        let dd = divisor.coeffs.len() - 1;
        let lead = &divisor.coeffs[dd];
        let mut r = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); r.len().saturating_sub(dd)];
        while r.len() > dd && !r.is_empty() {
            let shift = r.len() - 1 - dd;
            let factor = r.last().unwrap() / lead;
            for (i, c) in divisor.coeffs.iter().enumerate() {
                r[shift + i] -= &factor * c;
            }
            quot[shift] = factor;
            r.pop();
        }
        debug_assert!(r.iter().all(Zero::is_zero), "inexact polynomial division");
        Self::new(quot)
    }

    /// Same roots, each simple.
    pub fn squarefree(&self) -> RatPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_exact(&g).monic()
    }

    /// Upper bound on the modulus of every root.
    pub fn cauchy_bound(&self) -> Rational {
        let n = self.coeffs.len() - 1;
        let lead = self.coeffs[n].abs();
        let max = self.coeffs[..n]
            .iter()
            .map(|c| c.abs() / &lead)
            .max()
            .unwrap_or_else(Rational::zero);
        Rational::one() + max
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let m = c.abs();
            match (i, m.is_one()) {
                (0, _) => write!(f, "{m}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{m}x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{m}x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Sturm chain of a squarefree polynomial.
#[derive(Clone, Debug)]
pub struct SturmChain {
    // each member times the positive lcm of its denominators: same signs, no gcds
    scaled: Vec<Vec<BigInt>>,
}

fn integer_multiple(p: &RatPoly) -> Vec<BigInt> {
    let lcm = p.coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    p.coeffs.iter().map(|c| c.numer() * (&lcm / c.denom())).collect()
}

/// Sign of `d^deg · p(n/d)` for `d > 0`, which is the sign of `p(n/d)`.
fn sign_at(coeffs: &[BigInt], n: &BigInt, d: &BigInt) -> i8 {
    let mut iter = coeffs.iter().rev();
    let Some(lead) = iter.next() else { return 0 };
    let mut acc = lead.clone();
    let mut dpow = BigInt::one();
    for c in iter {
        dpow *= d;
        acc = acc * n + c * &dpow;
    }
    match acc.sign() {
        Sign::Plus => 1,
        Sign::Minus => -1,
        Sign::NoSign => 0,
    }
}

impl SturmChain {
    pub fn new(p: &RatPoly) -> Self {
        let mut chain = vec![p.clone(), p.derivative()];
        while !chain.last().unwrap().is_zero() {
            let n = chain.len();
            let r = chain[n - 2].rem(&chain[n - 1]).neg();
            if r.is_zero() {
                break;
            }
            chain.push(r);
        }
        chain.retain(|q| !q.is_zero());
        let scaled = chain.iter().map(integer_multiple).collect();
        SturmChain { scaled }
    }

    fn variations(&self, x: &Rational) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for p in &self.scaled {
            let s = sign_at(p, x.numer(), x.denom());
            if s == 0 {
                continue;
            }
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Distinct roots in the half-open interval `(lo, hi]`.
    pub fn count(&self, lo: &Rational, hi: &Rational) -> usize {
        self.variations(lo) - self.variations(hi)
    }
}

/// A root of a squarefree polynomial isolated in `(lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolatedRoot {
    pub lo: Rational,
    pub hi: Rational,
}

impl IsolatedRoot {
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }

    /// Halves the interval, keeping the half that holds the root.
    pub fn bisect(&mut self, sturm: &SturmChain) {
        let mid = self.midpoint();
        if sturm.count(&self.lo, &mid) == 1 {
            self.hi = mid;
        } else {
            self.lo = mid;
        }
    }
}

impl IsolatedRoot {
    /// The root itself when it is rational with a denominator small enough to
    /// be the simplest rational in the interval.
    pub fn rational_root(&self, p: &RatPoly) -> Option<Rational> {
        let c = simplest_rational(&self.lo, &self.hi);
        (c > self.lo && p.eval(&c).is_zero()).then_some(c)
    }
}

/// The rational with the smallest denominator in `[lo, hi]`, for `0 ≤ lo ≤ hi`.
pub fn simplest_rational(lo: &Rational, hi: &Rational) -> Rational {
    debug_assert!(!lo.is_negative() && lo <= hi);
    let f = lo.floor();
    if &f == lo {
        return f;
    }
    let next = &f + Rational::one();
    if &next <= hi {
        return next;
    }
    let inner = simplest_rational(&(hi - &f).recip(), &(lo - &f).recip());
    f + inner.recip()
}

/// Isolates every positive root of `p` (squarefree part taken internally).
pub fn isolate_positive_roots(p: &RatPoly) -> (RatPoly, SturmChain, Vec<IsolatedRoot>) {
    let sf = p.squarefree();
    let sturm = SturmChain::new(&sf);
    let mut out = Vec::new();
    if sf.degree().unwrap_or(0) == 0 {
        return (sf, sturm, out);
    }
    let mut stack = vec![(Rational::zero(), sf.cauchy_bound())];
    let two = Rational::from_integer(2.into());
    while let Some((lo, hi)) = stack.pop() {
        match sturm.count(&lo, &hi) {
            0 => {}
            1 => out.push(IsolatedRoot { lo, hi }),
            _ => {
                let mid = (&lo + &hi) / &two;
                stack.push((mid.clone(), hi));
                stack.push((lo, mid));
            }
        }
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    (sf, sturm, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn poly(c: &[i64]) -> RatPoly {
        RatPoly::new(c.iter().map(|&x| q(x, 1)).collect())
    }

    #[test]
    fn simplest_rational_examples() {
        assert_eq!(simplest_rational(&q(6, 10), &q(7, 10)), q(2, 3));
        assert_eq!(simplest_rational(&q(1, 2), &q(3, 2)), q(1, 1));
        assert_eq!(simplest_rational(&q(0, 1), &q(1, 10)), q(0, 1));
        let eps = q(1, 1 << 40);
        assert_eq!(simplest_rational(&(q(1, 3) - &eps), &(q(1, 3) + &eps)), q(1, 3));
    }

    #[test]
    fn rational_roots_are_recovered() {
        // (3x - 1)(x² - 2)
        let p = poly(&[2, -6, -1, 3]);
        let (sf, sturm, mut roots) = isolate_positive_roots(&p);
        roots.sort_by(|a, b| a.lo.cmp(&b.lo));
        for r in &mut roots {
            while r.width() > q(1, 1 << 30) {
                r.bisect(&sturm);
            }
        }
        assert_eq!(roots[0].rational_root(&sf), Some(q(1, 3)));
        assert_eq!(roots[1].rational_root(&sf), None);
    }

    #[test]
    fn arithmetic_and_gcd() {
        let a = poly(&[-1, 0, 1]); // x² - 1
        let b = poly(&[1, 1]); // x + 1
        assert_eq!(a.rem(&b), RatPoly::zero());
        assert_eq!(a.gcd(&b), b);
        assert_eq!(a.div_exact(&b), poly(&[-1, 1]));
        assert_eq!(b.mul(&poly(&[-1, 1])), a);
        let sq = poly(&[1, 1]).mul(&poly(&[1, 1])).mul(&poly(&[-2, 1]));
        assert_eq!(sq.squarefree(), poly(&[-2, -1, 1]));
        assert_eq!(poly(&[0, 0]).degree(), None);
        assert_eq!(format!("{}", poly(&[-4, -1, -1, 1])), "x^3 - x^2 - x - 4");
    }

    #[test]
    fn isolates_golden_ratio_roots() {
        // 1 - x - x², positive root (√5 - 1)/2
        let (_, sturm, roots) = isolate_positive_roots(&poly(&[1, -1, -1]));
        assert_eq!(roots.len(), 1);
        let mut r = roots[0].clone();
        while r.width() > q(1, 1 << 40) {
            r.bisect(&sturm);
        }
        let approx: f64 = num_traits::ToPrimitive::to_f64(&r.midpoint()).unwrap();
        assert!((approx - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-11);
    }

    #[test]
    fn counts_roots_on_endpoints_and_multiplicities() {
        // (x-1)²(x-2)(x+3): positive distinct roots 1 and 2
        let p = poly(&[-1, 1]).mul(&poly(&[-1, 1])).mul(&poly(&[-2, 1])).mul(&poly(&[3, 1]));
        let (_, sturm, roots) = isolate_positive_roots(&p);
        assert_eq!(roots.len(), 2);
        assert_eq!(sturm.count(&q(0, 1), &q(1, 1)), 1);
        assert_eq!(sturm.count(&q(1, 1), &q(2, 1)), 1);
        assert_eq!(sturm.count(&q(1, 1), &q(3, 2)), 0);
        // root at zero is not positive
        assert!(isolate_positive_roots(&poly(&[0, 1])).2.is_empty());
        assert!(isolate_positive_roots(&poly(&[1, 0, 1])).2.is_empty());
    }

    #[test]
    fn integer_signs_match_rational_evaluation() {
        // 3/7 - (5/2)x + (2/9)x^3 and its Sturm chain, at assorted rationals
        let p = RatPoly::new(vec![q(3, 7), q(-5, 2), q(0, 1), q(2, 9)]);
        let chain = [p.clone(), p.derivative(), p.rem(&p.derivative()).neg()];
        for x in [q(0, 1), q(1, 3), q(-7, 5), q(17, 4), q(1, 1000), q(-22, 7), q(3, 2)] {
            for c in &chain {
                let want = c.eval(&x);
                let want = if want.is_positive() { 1 } else if want.is_negative() { -1 } else { 0 };
                assert_eq!(sign_at(&integer_multiple(c), x.numer(), x.denom()), want, "{c} at {x}");
            }
        }
        // exact zero of (3x - 1)
        assert_eq!(sign_at(&integer_multiple(&poly(&[-1, 3])), &BigInt::from(1), &BigInt::from(3)), 0);
    }
}
