//! Coefficient domains.
//!
//! Everything in the crate is generic over [`Scalar`]. Two domains carry the
//! actual computations: exact rationals ([`Rational`]) and complex doubles
//! ([`Complex64`]). The cyclotomic fields in [`crate::cyclotomic`] only exist
//! so that root-of-unity orbit members can be checked exactly.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::linalg::{self, Matrix};

/// Arbitrary precision rational number, always stored in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// A field of coefficients.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + 'static
{
    /// `true` when arithmetic is exact and `is_zero` is a real zero test.
    const EXACT: bool;

    fn from_rational(q: &Rational) -> Self;

    fn from_int(v: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(v)))
    }

    /// Absolute value (or an upper bound on it); used for pivot choice and
    /// numeric tolerances.
    fn modulus(&self) -> f64;

    fn to_complex(&self) -> Complex64;

    /// The value as a rational number, when it is one.
    fn to_rational(&self) -> Option<Rational> {
        None
    }

    /// Determinant of a square matrix. Exact domains override this with a
    /// fraction-free elimination.
    fn determinant(m: &Matrix<Self>) -> Self {
        linalg::det_gauss(m)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn modulus(&self) -> f64 {
        rational_to_f64(&self.abs())
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(rational_to_f64(self), 0.0)
    }

    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }

    fn determinant(m: &Matrix<Self>) -> Self {
        linalg::det_bareiss_rational(m)
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn from_rational(q: &Rational) -> Self {
        Complex64::new(rational_to_f64(q), 0.0)
    }

    fn from_int(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }

    fn modulus(&self) -> f64 {
        self.norm()
    }

    fn to_complex(&self) -> Complex64 {
        *self
    }
}

/// Converts a rational to the nearest double, also for numerators and
/// denominators far outside the `f64` range.
pub fn rational_to_f64(q: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Shift both parts down to 60 significant bits and track the exponent.
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let ns = (nb - 60).max(0);
    let ds = (db - 60).max(0);
    let n = (q.numer() >> ns as usize).to_f64().unwrap_or(0.0);
    let d = (q.denom() >> ds as usize).to_f64().unwrap_or(1.0);
    n / d * 2f64.powi((ns - ds) as i32)
}

/// Small-integer rational literal.
pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational literal `n / d`.
pub fn qf(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Best rational approximation of `x` with denominator at most `max_den`,
/// by continued fractions.
pub fn rationalize(x: f64, max_den: i64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > max_den as i128 {
            break;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        let frac = r - a;
        if frac.abs() < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    if k1 == 0 {
        return None;
    }
    Some(Rational::new(BigInt::from(h1), BigInt::from(k1)))
}

/// Formats a rational as `p/q`, or `p` for integers.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p`, `p/q` or a decimal literal such as `-1.25`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.trim_start().starts_with('-');
        let int_digits = int.trim().trim_start_matches(['-', '+']);
        if !frac.chars().all(|c| c.is_ascii_digit())
            || !int_digits.chars().all(|c| c.is_ascii_digit())
        {
            return None;
        }
        let digits = format!("{}{}", if int_digits.is_empty() { "0" } else { int_digits }, frac);
        let n: BigInt = digits.parse().ok()?;
        let d = BigInt::from(10).pow(frac.len() as u32);
        let v = Rational::new(n, d);
        return Some(if neg { -v } else { v });
    }
    let n: BigInt = s.parse().ok()?;
    Some(Rational::from_integer(n))
}
