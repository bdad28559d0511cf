use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

/// Dense univariate polynomial, coefficients from the constant term up.
/// The leading coefficient is nonzero unless the polynomial is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct UPoly<C> {
    coeffs: Vec<C>,
}

impl<C: Scalar> UPoly<C> {
    pub fn new(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: C) -> Self {
        Self::new(vec![c])
    }

    /// `c * t^k`
    pub fn monomial(k: usize, c: C) -> Self {
        let mut v = vec![C::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    /// `prod (t - r)`
    pub fn from_roots(roots: &[C]) -> Self {
        roots.iter().fold(Self::constant(C::one()), |acc, r| {
            &acc * &Self::new(vec![-r.clone(), C::one()])
        })
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> C {
        self.coeffs.get(k).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &C) -> C {
        self.coeffs
            .iter()
            .rev()
            .fold(C::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::new(self.coeffs.iter().map(|v| v.clone() * c.clone()).collect())
    }

    pub fn map<D: Scalar>(&self, f: impl Fn(&C) -> D) -> UPoly<D> {
        UPoly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * C::from_int(k as i64))
                .collect(),
        )
    }

    /// Divides by the leading coefficient. The zero polynomial stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(lc) => {
                let inv = C::one() / lc.clone();
                self.scale(&inv)
            }
            None => self.clone(),
        }
    }

    /// Largest `k` with `t^k | p`.
    pub fn vanishing_order(&self) -> Result<usize> {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .ok_or(Error::ZeroPolynomial)
    }

    /// Euclidean division: `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lc_inv = C::one() / d.coeffs[dd].clone();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![C::zero(); r.len() - dd];
        for k in (dd..r.len()).rev() {
            let c = r[k].clone() * lc_inv.clone();
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                let v = r[k - dd + j].clone() - c.clone() * dc.clone();
                r[k - dd + j] = v;
            }
            quot[k - dd] = c;
        }
        r.truncate(dd);
        (Self::new(quot), Self::new(r))
    }

    /// Exact quotient; panics in debug builds when the division is inexact.
    pub fn exact_div(&self, d: &Self) -> Self {
        let (q, r) = self.div_rem(d);
        debug_assert!(!C::EXACT || r.is_zero(), "inexact division");
        q
    }

    /// Monic greatest common divisor (exact domains).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Square-free decomposition by Yun's algorithm: returns `(k, s_k)` with
    /// `self = lc * prod s_k^k`, each `s_k` monic, square-free and pairwise
    /// coprime. Only nonconstant factors are listed.
    pub fn square_free(&self) -> Vec<(usize, Self)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        if C::EXACT && f.degree().unwrap_or(0) >= 2 {
            let q: Option<Vec<Rational>> = f.coeffs.iter().map(|c| c.to_rational()).collect();
            if q.is_some_and(|q| super::modp::certainly_square_free(&q)) {
                return vec![(1, f)];
            }
        }
        let df = f.derivative();
        let a = f.gcd(&df);
        let mut b = f.exact_div(&a);
        let mut d = &df.exact_div(&a) - &b.derivative();
        let mut k = 1;
        while b.degree().unwrap_or(0) > 0 {
            let g = b.gcd(&d);
            b = b.exact_div(&g);
            let c = d.exact_div(&g);
            d = &c - &b.derivative();
            if g.degree().unwrap_or(0) > 0 {
                out.push((k, g));
            }
            k += 1;
        }
        out
    }
}

impl UPoly<Rational> {
    /// Rational roots of a polynomial, found numerically and then verified
    /// exactly; returns each root once.
    ///
    /// Each real approximation is refined by exact Newton steps and then
    /// tested against its continued-fraction convergents, whose denominators
    /// are bounded by the leading coefficient of the primitive integer form.
    pub fn rational_roots(&self) -> Vec<Rational> {
        let mut out: Vec<Rational> = Vec::new();
        for (_, s) in self.square_free() {
            if s.degree() == Some(1) {
                let r = -s.coeff(0) / s.coeff(1);
                if !out.contains(&r) {
                    out.push(r);
                }
                continue;
            }
            if super::modp::certainly_no_rational_root(&s.coeffs) {
                continue;
            }
            let pc = s.map(|c| c.to_complex());
            let Ok(roots) = super::roots::aberth(&pc, &super::roots::RootOptions::default()) else {
                continue;
            };
            let lc_bound = integer_leading_bound(&s);
            let ds = s.derivative();
            for r in roots {
                if r.im.abs() > 1e-6 * (1.0 + r.re.abs()) || !r.re.is_finite() {
                    continue;
                }
                let Some(x) = refine_real_root(&s, &ds, r.re, &lc_bound) else { continue };
                let Some(cand) = convergents(&x, &lc_bound).pop() else { continue };
                if s.eval(&cand).is_zero() && !out.contains(&cand) {
                    out.push(cand);
                }
            }
        }
        out
    }
}

/// `|lc|` of `p` scaled to a primitive integer polynomial.
fn integer_leading_bound(p: &UPoly<Rational>) -> BigInt {
    let den = p.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.coeffs.iter().map(|c| (c * Rational::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    (ints.last().expect("nonzero") / g).abs()
}

fn round_dyadic(x: &Rational, bits: u64) -> Rational {
    let scale = BigInt::one() << bits;
    let n = (x * Rational::from_integer(scale.clone())).round().to_integer();
    Rational::new(n, scale)
}

/// Newton refinement in exact arithmetic until the step is below
/// `1 / (4 lc^2)`, the separation of distinct rationals with denominator at
/// most `lc`.
fn refine_real_root(p: &UPoly<Rational>, dp: &UPoly<Rational>, x0: f64, lc: &BigInt) -> Option<Rational> {
    let mut x = Rational::from_float(x0)?;
    let target_bits = 2 * lc.bits() + 8;
    let mut bits = 64u64;
    for _ in 0..64 {
        let d = dp.eval(&x);
        if d.is_zero() {
            return None;
        }
        let step = p.eval(&x) / d;
        x = round_dyadic(&(&x - &step), bits);
        let small = step.is_zero() || {
            let s = step.abs();
            // |step| < 2^-target_bits
            (s * Rational::from_integer(BigInt::one() << target_bits)) < Rational::one()
        };
        if small && bits > target_bits {
            return Some(x);
        }
        bits = (bits * 2).min(target_bits + 64);
    }
    None
}

/// Continued-fraction convergents of `x` with denominators up to `max_den`;
/// the last one is the best approximation in that range.
fn convergents(x: &Rational, max_den: &BigInt) -> Vec<Rational> {
    let mut out = Vec::new();
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut y = x.clone();
    loop {
        let a = y.floor().to_integer();
        let h = &a * &h1 + &h0;
        let k = &a * &k1 + &k0;
        if &k > max_den {
            break;
        }
        out.push(Rational::new(h.clone(), k.clone()));
        h0 = std::mem::replace(&mut h1, h);
        k0 = std::mem::replace(&mut k1, k);
        let frac = &y - Rational::from_integer(a);
        if frac.is_zero() {
            break;
        }
        y = frac.recip();
    }
    out
}

impl<C: Scalar> Add for &UPoly<C> {
    type Output = UPoly<C>;
    fn add(self, rhs: Self) -> UPoly<C> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<C: Scalar> Sub for &UPoly<C> {
    type Output = UPoly<C>;
    fn sub(self, rhs: Self) -> UPoly<C> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<C: Scalar> Mul for &UPoly<C> {
    type Output = UPoly<C>;
    fn mul(self, rhs: Self) -> UPoly<C> {
        if self.is_zero() || rhs.is_zero() {
            return UPoly::zero();
        }
        let mut v = vec![C::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].clone() + a.clone() * b.clone();
            }
        }
        UPoly::new(v)
    }
}

impl<C: Scalar> Neg for &UPoly<C> {
    type Output = UPoly<C>;
    fn neg(self) -> UPoly<C> {
        UPoly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

/// The unique polynomial of degree at most `degree` through the samples,
/// in Newton form (divided differences), expanded to the monomial basis.
pub fn univariate_interpolate<C: Scalar>(samples: &[(C, C)], degree: usize) -> Result<UPoly<C>> {
    if samples.len() < degree + 1 {
        return Err(Error::TooFewSamples {
            needed: degree + 1,
            degree,
            got: samples.len(),
        });
    }
    for i in 0..samples.len() {
        for j in 0..i {
            if samples[i].0 == samples[j].0 {
                return Err(Error::DuplicateNodes);
            }
        }
    }
    let pts = &samples[..degree + 1];
    let xs: Vec<C> = pts.iter().map(|s| s.0.clone()).collect();
    let mut dd: Vec<C> = pts.iter().map(|s| s.1.clone()).collect();
    for level in 1..=degree {
        for i in (level..=degree).rev() {
            dd[i] = (dd[i].clone() - dd[i - 1].clone()) / (xs[i].clone() - xs[i - level].clone());
        }
    }
    // Horner on the Newton basis.
    let mut p = UPoly::constant(dd[degree].clone());
    for i in (0..degree).rev() {
        let lin = UPoly::new(vec![-xs[i].clone(), C::one()]);
        p = &(&p * &lin) + &UPoly::constant(dd[i].clone());
    }
    Ok(p)
}

/// Interpolation nodes `0, 1, -1, 2, -2, ...`.
pub fn default_nodes(count: usize) -> Vec<Rational> {
    (0..count as i64)
        .map(|k| {
            let m = (k + 1) / 2;
            crate::scalar::q(if k % 2 == 1 { m } else { -m })
        })
        .collect()
}
