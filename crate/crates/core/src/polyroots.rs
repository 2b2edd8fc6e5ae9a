//! Real roots of quadratic and cubic polynomials.
//!
//! Roots are bracketed between the critical points of the polynomial (found
//! recursively from the derivative) and the Cauchy bound, isolated by
//! sign-change bisection, then polished with a few Newton steps that are only
//! accepted while they stay inside the final bracket.
//!
//! Simple roots are assumed. A double root shows no sign change; it is reported
//! only when the critical point sits within the residual bound, which is a
//! best-effort answer.

use crate::error::{Error, Result};

/// Default interval width (relative to `max(1, |root|)`) at which bisection stops.
pub const DEFAULT_TOLERANCE: f64 = 1e-12;

const NEWTON_STEPS: usize = 4;

/// A real polynomial of degree 2 or 3, coefficients highest degree first.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if !(3..=4).contains(&coeffs.len()) {
            return Err(Error::DegeneratePolynomial(format!(
                "expected degree 2 or 3, got {} coefficients",
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::DegeneratePolynomial("non-finite coefficient".into()));
        }
        if coeffs[0] == 0.0 {
            return Err(Error::DegeneratePolynomial("zero leading coefficient".into()));
        }
        Ok(Polynomial { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn eval(&self, x: f64) -> f64 {
        horner(&self.coeffs, x)
    }

    /// `Σ |a_i| |x|^i`, the scale of rounding error in [`Polynomial::eval`].
    pub fn magnitude_at(&self, x: f64) -> f64 {
        horner_abs(&self.coeffs, x.abs())
    }
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().fold(0.0, |acc, &c| acc * x + c)
}

fn horner_abs(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().fold(0.0, |acc, &c| acc * x + c.abs())
}

fn derivative(coeffs: &[f64]) -> Vec<f64> {
    let n = coeffs.len() - 1;
    coeffs[..n]
        .iter()
        .enumerate()
        .map(|(i, &c)| c * (n - i) as f64)
        .collect()
}

fn cauchy_bound(coeffs: &[f64]) -> f64 {
    let lead = coeffs[0].abs();
    1.0 + coeffs[1..].iter().map(|c| c.abs() / lead).fold(0.0, f64::max)
}

fn bisect(coeffs: &[f64], mut lo: f64, mut hi: f64, tolerance: f64) -> f64 {
    let mut f_lo = horner(coeffs, lo);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= tolerance * mid.abs().max(1.0) {
            break;
        }
        let f_mid = horner(coeffs, mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    newton_polish(coeffs, 0.5 * (lo + hi), lo, hi)
}

fn newton_polish(coeffs: &[f64], mut x: f64, lo: f64, hi: f64) -> f64 {
    let deriv = derivative(coeffs);
    for _ in 0..NEWTON_STEPS {
        let fx = horner(coeffs, x);
        let dfx = horner(&deriv, x);
        if fx == 0.0 || dfx == 0.0 {
            break;
        }
        let next = x - fx / dfx;
        if !(lo..=hi).contains(&next) || horner(coeffs, next).abs() >= fx.abs() {
            break;
        }
        x = next;
    }
    x
}

fn roots_of(coeffs: &[f64], tolerance: f64) -> Vec<f64> {
    if coeffs.len() == 2 {
        return vec![-coeffs[1] / coeffs[0]];
    }
    let bound = cauchy_bound(coeffs);
    let mut points = vec![-bound];
    points.extend(
        roots_of(&derivative(coeffs), tolerance)
            .into_iter()
            .filter(|c| c.abs() < bound),
    );
    points.push(bound);

    let mut roots = Vec::new();
    for w in points.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let (f_lo, f_hi) = (horner(coeffs, lo), horner(coeffs, hi));
        if f_lo == 0.0 {
            roots.push(lo);
        } else if f_hi != 0.0 && (f_lo < 0.0) != (f_hi < 0.0) {
            roots.push(bisect(coeffs, lo, hi, tolerance));
        }
    }
    // interior critical points: exact zeros, or touching roots within rounding
    for &c in &points[1..points.len() - 1] {
        let fc = horner(coeffs, c);
        let touch = fc.abs() <= 64.0 * f64::EPSILON * horner_abs(coeffs, c.abs());
        if touch && !roots.iter().any(|&r| (r - c).abs() <= tolerance * c.abs().max(1.0)) {
            roots.push(c);
        }
    }
    let last = *points.last().unwrap();
    if horner(coeffs, last) == 0.0 {
        roots.push(last);
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup();
    roots
}

/// All real roots of `p`, ascending.
pub fn real_roots(p: &Polynomial, tolerance: f64) -> Result<Vec<f64>> {
    if !(tolerance > 0.0) {
        return Err(Error::out_of_range("tolerance", "positive", tolerance));
    }
    Ok(roots_of(&p.coeffs, tolerance))
}

/// The largest real root of `p`.
pub fn dominant_root(p: &Polynomial, tolerance: f64) -> Result<f64> {
    real_roots(p, tolerance)?.last().copied().ok_or(Error::NoRealRoot)
}
