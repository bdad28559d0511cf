//! Exact arithmetic in the cyclotomic fields `Q(zeta_N)` for small `N`.
//!
//! Elements are stored in the power basis `1, z, ..., z^(phi(N)-1)` of
//! `Q[z] / Phi_N(z)`, so equality of representations is equality of field
//! elements.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::poly::UPoly;
use crate::scalar::{rational_to_f64, Rational, Scalar};

/// Coefficients of `Phi_n`, constant term first.
fn cyclotomic_poly(n: usize) -> &'static [i64] {
    match n {
        1 => &[-1, 1],
        2 => &[1, 1],
        3 => &[1, 1, 1],
        4 => &[1, 0, 1],
        5 => &[1, 1, 1, 1, 1],
        6 => &[1, -1, 1],
        7 => &[1, 1, 1, 1, 1, 1, 1],
        8 => &[1, 0, 0, 0, 1],
        9 => &[1, 0, 0, 1, 0, 0, 1],
        10 => &[1, -1, 1, -1, 1],
        12 => &[1, 0, -1, 0, 1],
        _ => panic!("cyclotomic field of order {n} is not supported"),
    }
}

/// An element of `Q(zeta_N)`.
#[derive(Clone, PartialEq)]
pub struct Cyclotomic<const N: usize> {
    c: Vec<Rational>,
}

impl<const N: usize> Cyclotomic<N> {
    pub fn degree() -> usize {
        cyclotomic_poly(N).len() - 1
    }

    pub fn from_coeffs(coeffs: &[Rational]) -> Self {
        Self::reduce(coeffs.to_vec())
    }

    /// `zeta^k` with `zeta = exp(2 pi i / N)`.
    pub fn zeta_pow(k: i64) -> Self {
        let e = k.rem_euclid(N as i64) as usize;
        let mut v = vec![Rational::zero(); e + 1];
        v[e] = Rational::one();
        Self::reduce(v)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.c
    }

    /// `Some(q)` when the element lies in `Q`.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.c.iter().skip(1).all(Zero::is_zero) {
            Some(self.c[0].clone())
        } else {
            None
        }
    }

    fn reduce(mut v: Vec<Rational>) -> Self {
        let phi = cyclotomic_poly(N);
        let m = phi.len() - 1;
        for k in (m..v.len()).rev() {
            if v[k].is_zero() {
                continue;
            }
            let lead = v[k].clone();
            for (j, &p) in phi.iter().enumerate() {
                if p != 0 {
                    v[k - m + j] -= &lead * Rational::from_integer(p.into());
                }
            }
        }
        v.resize(m, Rational::zero());
        Cyclotomic { c: v }
    }

    fn as_upoly(&self) -> UPoly<Rational> {
        UPoly::new(self.c.clone())
    }

    fn inverse(&self) -> Self {
        assert!(!self.is_zero(), "division by zero in a cyclotomic field");
        let modulus = UPoly::new(cyclotomic_poly(N).iter().map(|&v| Rational::from_integer(v.into())).collect());
        // extended Euclid: track s with s * self = r (mod Phi_N)
        let (mut r0, mut r1) = (modulus, self.as_upoly());
        let (mut s0, mut s1) = (UPoly::<Rational>::zero(), UPoly::constant(Rational::one()));
        // Phi_N is irreducible, so the remainders end in a nonzero constant.
        while r1.degree() != Some(0) {
            let (q, r) = r0.div_rem(&r1);
            let s = &s0 - &(&q * &s1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        let c = r1.coeff(0);
        Self::reduce(s1.scale(&(Rational::one() / c)).coeffs().to_vec())
    }
}

impl<const N: usize> fmt::Debug for Cyclotomic<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*z")?,
                _ => write!(f, "{c}*z^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl<const N: usize> Add for Cyclotomic<N> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Cyclotomic {
            c: self.c.into_iter().zip(o.c).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<const N: usize> Sub for Cyclotomic<N> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Cyclotomic {
            c: self.c.into_iter().zip(o.c).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<const N: usize> Neg for Cyclotomic<N> {
    type Output = Self;
    fn neg(self) -> Self {
        Cyclotomic {
            c: self.c.into_iter().map(|a| -a).collect(),
        }
    }
}

impl<const N: usize> Mul for Cyclotomic<N> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let m = self.c.len();
        let mut v = vec![Rational::zero(); 2 * m - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] += a * b;
                }
            }
        }
        Self::reduce(v)
    }
}

impl<const N: usize> Div for Cyclotomic<N> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Self) -> Self {
        self * o.inverse()
    }
}

impl<const N: usize> Zero for Cyclotomic<N> {
    fn zero() -> Self {
        Cyclotomic {
            c: vec![Rational::zero(); Self::degree()],
        }
    }
    fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }
}

impl<const N: usize> One for Cyclotomic<N> {
    fn one() -> Self {
        let mut z = Self::zero();
        z.c[0] = Rational::one();
        z
    }
}

impl<const N: usize> Scalar for Cyclotomic<N> {
    const EXACT: bool = true;

    fn from_rational(q: &Rational) -> Self {
        let mut z = Self::zero();
        z.c[0] = q.clone();
        z
    }

    fn modulus(&self) -> f64 {
        self.to_complex().norm()
    }

    fn to_complex(&self) -> Complex64 {
        let zeta = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / N as f64);
        self.c
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * zeta + rational_to_f64(c))
    }

    fn to_rational(&self) -> Option<Rational> {
        self.as_rational()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qf};

    #[test]
    fn roots_of_unity_multiply() {
        type K = Cyclotomic<5>;
        let z = K::zeta_pow(1);
        let mut acc = K::one();
        for _ in 0..5 {
            acc = acc * z.clone();
        }
        assert_eq!(acc, K::one());
        let sum = (0..5).fold(K::zero(), |s, k| s + K::zeta_pow(k));
        assert!(sum.is_zero());
        assert_eq!(K::zeta_pow(7), K::zeta_pow(2));
    }

    #[test]
    fn inverse_round_trips() {
        type K = Cyclotomic<7>;
        let a = K::from_coeffs(&[q(3), qf(-1, 2), q(0), q(5), q(1), q(-2)]);
        let b = K::one() / a.clone();
        assert_eq!(a * b, K::one());
        type F = Cyclotomic<4>;
        let i = F::zeta_pow(1);
        assert_eq!(i.clone() * i.clone(), -F::one());
        assert_eq!(F::one() / i.clone(), -i);
    }

    #[test]
    fn embedding_is_a_homomorphism() {
        type K = Cyclotomic<6>;
        let a = K::from_coeffs(&[q(1), q(2)]);
        let b = K::from_coeffs(&[qf(1, 3), q(-1)]);
        let lhs = (a.clone() * b.clone()).to_complex();
        let rhs = a.to_complex() * b.to_complex();
        assert!((lhs - rhs).norm() < 1e-12);
        assert_eq!(K::zeta_pow(3).as_rational(), Some(q(-1)));
    }
}
