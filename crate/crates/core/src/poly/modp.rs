//! Reductions of rational univariate polynomials modulo small primes, used
//! as exact certificates: a property of `p mod l` that survives lifting
//! (square-freeness, absence of roots) settles it over `Q` without any
//! rational gcd.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::scalar::Rational;

const PRIMES: [u64; 24] = [
    101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223, 227,
];

fn inv(a: u64, l: u64) -> u64 {
    pow(a, l - 2, l)
}

fn pow(mut a: u64, mut e: u64, l: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % l;
        }
        a = a * a % l;
        e >>= 1;
    }
    r
}

fn residue(x: &BigInt, l: u64) -> u64 {
    x.mod_floor(&BigInt::from(l)).to_u64().expect("below l")
}

/// `p mod l`, low degree first, or `None` when `l` divides a denominator or
/// the leading coefficient.
fn reduce(coeffs: &[Rational], l: u64) -> Option<Vec<u64>> {
    let mut out = Vec::with_capacity(coeffs.len());
    for c in coeffs {
        let den = residue(c.denom(), l);
        if den == 0 {
            return None;
        }
        out.push(residue(c.numer(), l) * inv(den, l) % l);
    }
    (*out.last()? != 0).then_some(out)
}

fn trim(mut p: Vec<u64>) -> Vec<u64> {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

fn rem(mut a: Vec<u64>, b: &[u64], l: u64) -> Vec<u64> {
    let lb = inv(*b.last().expect("nonzero divisor"), l);
    while a.len() >= b.len() {
        let q = a[a.len() - 1] * lb % l;
        let shift = a.len() - b.len();
        for (i, c) in b.iter().enumerate() {
            a[shift + i] = (a[shift + i] + l - q * c % l) % l;
        }
        a = trim(a);
    }
    a
}

fn gcd_degree(mut a: Vec<u64>, mut b: Vec<u64>, l: u64) -> usize {
    while !b.is_empty() {
        let r = rem(a, &b, l);
        a = b;
        b = r;
    }
    a.len().saturating_sub(1)
}

/// `true` only if `p` is square-free over `Q`. A `false` answer is
/// inconclusive.
pub fn certainly_square_free(coeffs: &[Rational]) -> bool {
    let deg = coeffs.len().saturating_sub(1);
    PRIMES.iter().take(6).any(|&l| {
        let Some(p) = reduce(coeffs, l) else { return false };
        if deg as u64 >= l {
            return false;
        }
        let dp = trim((1..p.len()).map(|k| p[k] * k as u64 % l).collect());
        gcd_degree(p, dp, l) == 0
    })
}

/// `true` only if `p` has no rational root.
pub fn certainly_no_rational_root(coeffs: &[Rational]) -> bool {
    PRIMES.iter().any(|&l| {
        let Some(p) = reduce(coeffs, l) else { return false };
        (0..l).all(|x| p.iter().rev().fold(0, |acc, c| (acc * x + c) % l) != 0)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qf};

    #[test]
    fn certificates() {
        // (x - 1/2)(x^2 + 1)
        let p = [qf(-1, 2), q(1), qf(-1, 2), q(1)];
        assert!(certainly_square_free(&p));
        assert!(!certainly_no_rational_root(&p));
        // (x - 3)^2
        assert!(!certainly_square_free(&[q(9), q(-6), q(1)]));
        // x^2 - 2
        assert!(certainly_no_rational_root(&[q(-2), q(0), q(1)]));
    }
}
