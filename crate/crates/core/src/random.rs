//! Deterministic random sampling of rationals, forms and tensors.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::Matrix;
use crate::poly::{monomials_of_degree, MPoly};
use crate::scalar::Rational;
use crate::tensor::{DenseTensor, PSTensor, SymForm};

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `p / q` with `p` uniform in `[-100, 100]` and `q` uniform in
/// `[-100, 100] \ {0}`.
pub fn rational<R: Rng>(rng: &mut R) -> Rational {
    let p: i64 = rng.random_range(-100..=100);
    let mut q: i64 = 0;
    while q == 0 {
        q = rng.random_range(-100..=100);
    }
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Like [`rational`] but never zero.
pub fn nonzero_rational<R: Rng>(rng: &mut R) -> Rational {
    loop {
        let r = rational(rng);
        if r != Rational::from_integer(0.into()) {
            return r;
        }
    }
}

pub fn small_int<R: Rng>(rng: &mut R, bound: i64) -> Rational {
    Rational::from_integer(rng.random_range(-bound..=bound).into())
}

pub fn form<R: Rng>(rng: &mut R, nvars: usize, degree: u32) -> MPoly<Rational> {
    let coeffs: Vec<Rational> = monomials_of_degree(nvars, degree)
        .iter()
        .map(|_| rational(rng))
        .collect();
    MPoly::from_dense(nvars, degree, &coeffs).expect("matching length")
}

pub fn sym_form<R: Rng>(rng: &mut R, n: usize, d: usize) -> SymForm {
    SymForm::new(n, d, form(rng, n + 1, d as u32)).expect("homogeneous")
}

/// A form with every coefficient nonzero, so that no coordinate point or
/// coordinate line is special for it.
pub fn generic_sym_form<R: Rng>(rng: &mut R, n: usize, d: usize) -> SymForm {
    let coeffs: Vec<Rational> = monomials_of_degree(n + 1, d as u32)
        .iter()
        .map(|_| nonzero_rational(rng))
        .collect();
    SymForm::from_dense(n, d, &coeffs).expect("matching length")
}

pub fn ps_tensor<R: Rng>(rng: &mut R, n: usize, d: usize) -> PSTensor {
    let comps = (0..=n).map(|_| form(rng, n + 1, d as u32 - 1)).collect();
    PSTensor::new(n, d, comps).expect("valid shape")
}

pub fn dense_tensor<R: Rng>(rng: &mut R, n: usize, d: usize) -> DenseTensor {
    let len = (n + 1).pow(d as u32);
    DenseTensor::new(n, d, (0..len).map(|_| rational(rng)).collect()).expect("supported shape")
}

/// A linear form `a x_0 + b x_1 + ...` with nonzero coefficient vector.
pub fn linear_form<R: Rng>(rng: &mut R, nvars: usize) -> MPoly<Rational> {
    loop {
        let l = form(rng, nvars, 1);
        if !l.is_zero() {
            return l;
        }
    }
}

pub fn permutation<R: Rng>(rng: &mut R, m: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..m).collect();
    p.shuffle(rng);
    p
}

/// A random invertible rational matrix.
pub fn invertible_matrix<R: Rng>(rng: &mut R, m: usize) -> Vec<Vec<Rational>> {
    loop {
        let a: Vec<Vec<Rational>> = (0..m).map(|_| (0..m).map(|_| small_int(rng, 9)).collect()).collect();
        if !Matrix::from_rows(a.clone()).det().is_zero() {
            return a;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampling_is_deterministic() {
        let a: Vec<Rational> = (0..5).map(|_| rational(&mut rng(3))).collect();
        let b: Vec<Rational> = (0..5).map(|_| rational(&mut rng(3))).collect();
        assert_eq!(a, b);
        let mut r = rng(11);
        let t = ps_tensor(&mut r, 2, 3);
        assert_eq!(t.to_flat().len(), 18);
        let p = permutation(&mut r, 4);
        let mut s = p.clone();
        s.sort();
        assert_eq!(s, vec![0, 1, 2, 3]);
    }

    #[test]
    fn rationals_stay_in_range() {
        let mut r = rng(1);
        for _ in 0..500 {
            let x = rational(&mut r);
            assert!(x.numer().magnitude() <= &100u32.into());
            assert!(x.denom() >= &BigInt::from(1) && x.denom() <= &BigInt::from(100));
        }
    }
}
