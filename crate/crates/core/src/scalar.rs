//! Scalar representations used by the tree enumerator.
//!
//! Two implementations of [`Value`] exist: [`Rational`] for exact,
//! theorem-checking runs and [`ScaledFloat`] for long float runs where plain
//! `f64` would overflow.

use std::cmp::Ordering;
use std::f64::consts::{LN_10, LN_2};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number.
pub type Rational = num_rational::BigRational;

/// Arithmetic needed by the sign-tree enumerator.
///
/// All tree values are nonnegative, so the trait only asks for the operations
/// the recursion uses: sums, products and the absolute difference.
pub trait Value:
    Clone + Eq + Hash + Ord + Zero + One + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    fn add_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    /// `|self - other|`.
    fn abs_diff(&self, other: &Self) -> Self;
    /// `max(self - other, 0)`. Exact values never need the clamp; rounded ones can.
    fn saturating_sub(&self, other: &Self) -> Self;
    fn from_count(count: &BigUint) -> Self;
    /// `self / 2^n`.
    fn div_pow2(&self, n: u32) -> Self;
    fn is_sign_negative(&self) -> bool;
    fn to_f64(&self) -> f64;
    /// Natural logarithm of a positive value, without overflowing on huge magnitudes.
    fn ln(&self) -> f64;
    /// Hash consistent with `Eq`, cheaper than `Hash` where that one canonicalizes.
    fn hash_key<H: Hasher>(&self, state: &mut H) {
        self.hash(state);
    }
}

impl Value for Rational {
    // Ratio's own Hash runs a continued-fraction expansion; values here are
    // always reduced, so numerator and denominator identify them.
    fn hash_key<H: Hasher>(&self, state: &mut H) {
        self.numer().hash(state);
        self.denom().hash(state);
    }

    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn abs_diff(&self, other: &Self) -> Self {
        (self - other).abs()
    }

    fn saturating_sub(&self, other: &Self) -> Self {
        let d = self - other;
        if Signed::is_negative(&d) {
            Zero::zero()
        } else {
            d
        }
    }

    fn from_count(count: &BigUint) -> Self {
        Rational::from_integer(BigInt::from(count.clone()))
    }

    fn div_pow2(&self, n: u32) -> Self {
        self / Rational::from_integer(BigInt::one() << n)
    }

    fn is_sign_negative(&self) -> bool {
        Signed::is_negative(self)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn ln(&self) -> f64 {
        ln_bigint(self.numer()) - ln_bigint(self.denom())
    }
}

fn ln_bigint(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().unwrap_or(f64::NAN).abs().ln();
    }
    let shift = bits - 64;
    let top = (n.magnitude() >> shift).to_f64().unwrap_or(f64::NAN);
    top.ln() + shift as f64 * LN_2
}

/// A float `mant · 2^exp` with `1 ≤ |mant| < 2` (or exactly zero).
///
/// The exponent lives in an `i64`, so magnitudes far beyond `f64::MAX` stay
/// representable while the mantissa keeps full double precision.
#[derive(Clone, Copy, Debug)]
pub struct ScaledFloat {
    mant: f64,
    exp: i64,
}

impl ScaledFloat {
    pub const ZERO: ScaledFloat = ScaledFloat { mant: 0.0, exp: 0 };
    pub const ONE: ScaledFloat = ScaledFloat { mant: 1.0, exp: 0 };

    /// Panics on NaN or infinity.
    pub fn from_f64(x: f64) -> Self {
        Self::normalize(x, 0)
    }

    fn normalize(x: f64, exp: i64) -> Self {
        assert!(x.is_finite(), "ScaledFloat from non-finite value {x}");
        if x == 0.0 {
            return Self::ZERO;
        }
        let (mut x, mut exp) = (x, exp);
        if x.abs() < f64::MIN_POSITIVE {
            x *= 2f64.powi(64);
            exp -= 64;
        }
        let bits = x.to_bits();
        let e = ((bits >> 52) & 0x7ff) as i64 - 1023;
        let mant = f64::from_bits((bits & !(0x7ff << 52)) | (1023 << 52));
        ScaledFloat { mant, exp: exp + e }
    }

    pub fn mantissa(&self) -> f64 {
        self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn abs(&self) -> Self {
        ScaledFloat {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    fn signum(&self) -> i8 {
        if self.mant > 0.0 {
            1
        } else if self.mant < 0.0 {
            -1
        } else {
            0
        }
    }
}

fn ldexp(x: f64, k: i64) -> f64 {
    // two steps keep each power of two representable
    let half = k / 2;
    x * 2f64.powi(half as i32) * 2f64.powi((k - half) as i32)
}

impl Add for ScaledFloat {
    type Output = ScaledFloat;

    fn add(self, rhs: Self) -> Self {
        if self.mant == 0.0 {
            return rhs;
        }
        if rhs.mant == 0.0 {
            return self;
        }
        let (hi, lo) = if self.exp >= rhs.exp {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let gap = hi.exp - lo.exp;
        if gap > 64 {
            return hi;
        }
        Self::normalize(hi.mant + ldexp(lo.mant, -gap), hi.exp)
    }
}

impl Neg for ScaledFloat {
    type Output = ScaledFloat;

    fn neg(self) -> Self {
        if self.mant == 0.0 {
            self
        } else {
            ScaledFloat {
                mant: -self.mant,
                exp: self.exp,
            }
        }
    }
}

impl Sub for ScaledFloat {
    type Output = ScaledFloat;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for ScaledFloat {
    type Output = ScaledFloat;

    fn mul(self, rhs: Self) -> Self {
        if self.mant == 0.0 || rhs.mant == 0.0 {
            return Self::ZERO;
        }
        Self::normalize(self.mant * rhs.mant, self.exp + rhs.exp)
    }
}

impl PartialEq for ScaledFloat {
    fn eq(&self, other: &Self) -> bool {
        self.mant.to_bits() == other.mant.to_bits() && self.exp == other.exp
    }
}

impl Eq for ScaledFloat {}

impl Hash for ScaledFloat {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.mant.to_bits().hash(state);
        self.exp.hash(state);
    }
}

impl Ord for ScaledFloat {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb || sa == 0 {
            return sa.cmp(&sb);
        }
        let by_magnitude = self
            .exp
            .cmp(&other.exp)
            .then_with(|| self.mant.abs().total_cmp(&other.mant.abs()));
        if sa > 0 {
            by_magnitude
        } else {
            by_magnitude.reverse()
        }
    }
}

impl PartialOrd for ScaledFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ScaledFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp.abs() < 1000 {
            return write!(f, "{}", Value::to_f64(self));
        }
        let log10 = Value::ln(&self.abs()) / LN_10;
        let dec_exp = log10.floor();
        let sign = if self.mant < 0.0 { "-" } else { "" };
        write!(f, "{sign}{}e{}", 10f64.powf(log10 - dec_exp), dec_exp as i64)
    }
}

impl Zero for ScaledFloat {
    fn zero() -> Self {
        Self::ZERO
    }

    fn is_zero(&self) -> bool {
        self.mant == 0.0
    }
}

impl One for ScaledFloat {
    fn one() -> Self {
        Self::ONE
    }
}

impl Value for ScaledFloat {
    fn add_ref(&self, other: &Self) -> Self {
        *self + *other
    }

    fn mul_ref(&self, other: &Self) -> Self {
        *self * *other
    }

    fn abs_diff(&self, other: &Self) -> Self {
        (*self - *other).abs()
    }

    fn saturating_sub(&self, other: &Self) -> Self {
        let d = *self - *other;
        if d.mant < 0.0 {
            Self::ZERO
        } else {
            d
        }
    }

    fn from_count(count: &BigUint) -> Self {
        let bits = count.bits();
        if bits <= 64 {
            let v = count.to_u64().expect("fits in 64 bits");
            return Self::from_f64(v as f64);
        }
        let shift = bits - 64;
        let top = (count >> shift).to_u64().expect("fits in 64 bits");
        Self::normalize(top as f64, shift as i64)
    }

    fn div_pow2(&self, n: u32) -> Self {
        if self.mant == 0.0 {
            return *self;
        }
        ScaledFloat {
            mant: self.mant,
            exp: self.exp - i64::from(n),
        }
    }

    fn is_sign_negative(&self) -> bool {
        self.mant < 0.0
    }

    fn to_f64(&self) -> f64 {
        if self.mant == 0.0 {
            0.0
        } else if self.exp > 1024 {
            self.mant.signum() * f64::INFINITY
        } else if self.exp < -1100 {
            0.0
        } else {
            ldexp(self.mant, self.exp)
        }
    }

    fn ln(&self) -> f64 {
        self.mant.ln() + self.exp as f64 * LN_2
    }
}

/// Parses `p/q`, an integer, or a decimal such as `0.71` or `1.5e-3` into an
/// exact rational. A decimal is read as the exact decimal fraction it denotes.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let err = || Error::Parse(text.to_string());
    match text.split_once('/') {
        Some((num, den)) => {
            let num = parse_decimal(num.trim()).ok_or_else(err)?;
            let den = parse_decimal(den.trim()).ok_or_else(err)?;
            if Zero::is_zero(&den) {
                return Err(err());
            }
            Ok(num / den)
        }
        None => parse_decimal(text).ok_or_else(err),
    }
}

fn parse_decimal(text: &str) -> Option<Rational> {
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], body[i + 1..].parse::<i32>().ok()?),
        None => (body, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let magnitude = BigInt::parse_bytes(digits.as_bytes(), 10)?;
    let numer = if negative { -magnitude } else { magnitude };
    let scale = exponent - frac_part.len() as i32;
    let ten_pow = |k: u32| Rational::from_integer(num_traits::pow(BigInt::from(10), k as usize));
    let value = Rational::from_integer(numer);
    Some(if scale >= 0 {
        value * ten_pow(scale as u32)
    } else {
        value / ten_pow(scale.unsigned_abs())
    })
}

/// Exact rational with the value of a finite `f64`.
pub fn rational_from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("1/2").unwrap(), q(1, 2));
        assert_eq!(parse_rational("0.71").unwrap(), q(71, 100));
        assert_eq!(parse_rational("3").unwrap(), q(3, 1));
        assert_eq!(parse_rational("1.5e-3").unwrap(), q(3, 2000));
        assert_eq!(parse_rational("2E2").unwrap(), q(200, 1));
        assert_eq!(parse_rational(".5").unwrap(), q(1, 2));
        assert_eq!(parse_rational("-0.25").unwrap(), q(-1, 4));
        assert_eq!(parse_rational("6/4").unwrap(), q(3, 2));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "abc", "1/0", "1..2", "0x10", "1/", "."] {
            assert!(parse_rational(bad).is_err(), "{bad:?} parsed");
        }
    }

    #[test]
    fn scaled_float_normalizes() {
        let x = ScaledFloat::from_f64(12.0);
        assert_eq!(x.mantissa(), 1.5);
        assert_eq!(x.exponent(), 3);
        let tiny = ScaledFloat::from_f64(f64::MIN_POSITIVE / 8.0);
        assert_eq!(tiny.mantissa(), 1.0);
        assert_eq!(tiny.exponent(), -1025);
        assert_eq!(ScaledFloat::from_f64(-0.0), ScaledFloat::ZERO);
    }

    #[test]
    fn scaled_float_survives_overflow() {
        let mut x = ScaledFloat::from_f64(1e300);
        for _ in 0..10 {
            x = x * x;
        }
        assert!(x.exponent() > 1_000_000);
        assert!((Value::ln(&x) - 1024.0 * 300.0 * LN_10).abs() < 1e-6 * Value::ln(&x));
        assert!(Value::to_f64(&x).is_infinite());
        let y = x.div_pow2(10);
        assert!(y < x);
        assert_eq!(x.abs_diff(&x), ScaledFloat::ZERO);
    }

    #[test]
    fn scaled_float_matches_f64_in_range() {
        let vals = [0.0, 1.0, 3.5, 1e-5, 7.25e10, 2.0f64.powi(-1030)];
        for &a in &vals {
            for &b in &vals {
                let (sa, sb) = (ScaledFloat::from_f64(a), ScaledFloat::from_f64(b));
                assert_eq!(Value::to_f64(&(sa + sb)), a + b);
                assert_eq!(Value::to_f64(&(sa * sb)), a * b);
                assert_eq!(Value::to_f64(&sa.abs_diff(&sb)), (a - b).abs());
                assert_eq!(sa.cmp(&sb), a.total_cmp(&b));
            }
        }
    }

    #[test]
    fn counts_convert_beyond_u64() {
        let big = BigUint::one() << 200u32;
        let s = ScaledFloat::from_count(&big);
        assert_eq!((s.mantissa(), s.exponent()), (1.0, 200));
        let r = Rational::from_count(&big);
        assert!((Value::ln(&r) - 200.0 * LN_2).abs() < 1e-12);
    }

    #[test]
    fn rational_ln_handles_huge_values() {
        let big = Rational::from_integer(BigInt::from(3).pow(2000));
        assert!((Value::ln(&big) - 2000.0 * 3f64.ln()).abs() < 1e-9);
    }
}
