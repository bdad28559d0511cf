use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::poly::monomial::{monomials_of_degree, Monomial};
use crate::scalar::Scalar;

/// Sparse multivariate polynomial. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct MPoly<C> {
    nvars: usize,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Scalar> MPoly<C> {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        Self::from_terms(nvars, [(Monomial::one(nvars), c)])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::from_terms(nvars, [(Monomial::var(nvars, i), C::one())])
    }

    pub fn monomial(exps: &[u32], c: C) -> Self {
        Self::from_terms(exps.len(), [(Monomial::new(exps.to_vec()), c)])
    }

    /// Builds a polynomial, summing repeated monomials and dropping zeros.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial arity");
            p.add_term(m, c);
        }
        p
    }

    /// Homogeneous form of degree `k` with the given coefficients in
    /// descending graded-lex order.
    pub fn from_dense(nvars: usize, k: u32, coeffs: &[C]) -> Result<Self> {
        let mons = monomials_of_degree(nvars, k);
        if mons.len() != coeffs.len() {
            return Err(Error::Shape(format!(
                "expected {} coefficients for degree {k} in {nvars} variables, got {}",
                mons.len(),
                coeffs.len()
            )));
        }
        Ok(Self::from_terms(nvars, mons.into_iter().zip(coeffs.iter().cloned())))
    }

    /// Coefficients of the degree-`k` part in descending graded-lex order.
    pub fn to_dense(&self, k: u32) -> Vec<C> {
        monomials_of_degree(self.nvars, k)
            .iter()
            .map(|m| self.coeff(m))
            .collect()
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get().clone() + c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// `Some(k)` when every term has degree `k`; the zero polynomial is
    /// homogeneous of every degree and reports `None`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Monomial::degree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous_of(&self, k: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == k)
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self::from_terms(
            self.nvars,
            self.terms.iter().map(|(m, v)| (m.clone(), v.clone() * c.clone())),
        )
    }

    pub fn map_coeffs<D: Scalar>(&self, f: impl Fn(&C) -> D) -> MPoly<D> {
        MPoly::from_terms(self.nvars, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_arity(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    /// Product of two polynomials over the same variables.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_arity(other)?;
        let mut out = Self::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(self.nvars, C::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    fn same_arity(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::NvarsMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    /// Value at a point.
    pub fn eval(&self, point: &[C]) -> Result<C> {
        if point.len() != self.nvars {
            return Err(Error::PointLength {
                expected: self.nvars,
                got: point.len(),
            });
        }
        let maxdeg = self.total_degree().unwrap_or(0) as usize;
        // powers[i][e] = point[i]^e
        let powers: Vec<Vec<C>> = point
            .iter()
            .map(|x| {
                let mut v = Vec::with_capacity(maxdeg + 1);
                v.push(C::one());
                for e in 1..=maxdeg {
                    let next = v[e - 1].clone() * x.clone();
                    v.push(next);
                }
                v
            })
            .collect();
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    t = t * powers[i][e as usize].clone();
                }
            }
            acc = acc + t;
        }
        Ok(acc)
    }

    /// Formal partial derivative with respect to `x_i`.
    pub fn partial_derivative(&self, i: usize) -> Result<Self> {
        if i >= self.nvars {
            return Err(Error::VariableIndex {
                index: i,
                nvars: self.nvars,
            });
        }
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.exps()[i];
            if e == 0 {
                return None;
            }
            let mut exps = m.exps().to_vec();
            exps[i] -= 1;
            Some((Monomial::new(exps), c.clone() * C::from_int(e as i64)))
        });
        Ok(Self::from_terms(self.nvars, terms))
    }

    pub fn gradient(&self) -> Vec<Self> {
        (0..self.nvars)
            .map(|i| self.partial_derivative(i).expect("index in range"))
            .collect()
    }

    /// `p(A x)`, i.e. every `x_i` replaced by `sum_j A[i][j] x_j`. `A` may be
    /// rectangular: its column count is the arity of the result.
    pub fn linear_substitution(&self, a: &[Vec<C>]) -> Result<Self> {
        if a.len() != self.nvars {
            return Err(Error::Shape(format!(
                "substitution has {} rows for {} variables",
                a.len(),
                self.nvars
            )));
        }
        let out_vars = a.first().map_or(0, Vec::len);
        let maxdeg = self.total_degree().unwrap_or(0) as usize;
        let forms: Vec<Self> = a
            .iter()
            .map(|row| {
                Self::from_terms(
                    out_vars,
                    row.iter()
                        .enumerate()
                        .map(|(j, c)| (Monomial::var(out_vars, j), c.clone())),
                )
            })
            .collect();
        let powers: Vec<Vec<Self>> = forms
            .iter()
            .map(|f| {
                let mut v = vec![Self::constant(out_vars, C::one())];
                for e in 1..=maxdeg {
                    let next = &v[e - 1] * f;
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = Self::zero(out_vars);
        for (m, c) in &self.terms {
            let mut t = Self::constant(out_vars, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    t = &t * &powers[i][e as usize];
                }
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// `p(a_0 x_0, ..., a_n x_n)`.
    pub fn scale_vars(&self, a: &[C]) -> Self {
        Self::from_terms(
            self.nvars,
            self.terms.iter().map(|(m, c)| {
                let f = m
                    .exps()
                    .iter()
                    .zip(a)
                    .fold(c.clone(), |acc, (&e, ai)| acc * pow_scalar(ai, e));
                (m.clone(), f)
            }),
        )
    }

    /// Variables renamed by `x_j -> x_{perm[j]}`.
    pub fn permute_vars(&self, perm: &[usize]) -> Self {
        Self::from_terms(
            self.nvars,
            self.terms.iter().map(|(m, c)| (m.permuted(perm), c.clone())),
        )
    }

    /// Coefficient norm `max |c|`.
    pub fn max_coeff(&self) -> f64 {
        self.terms.values().map(Scalar::modulus).fold(0.0, f64::max)
    }
}

pub fn pow_scalar<C: Scalar>(a: &C, e: u32) -> C {
    let mut acc = C::one();
    for _ in 0..e {
        acc = acc * a.clone();
    }
    acc
}

impl<C: Scalar> Add for &MPoly<C> {
    type Output = MPoly<C>;
    fn add(self, rhs: Self) -> MPoly<C> {
        self.checked_add(rhs).expect("nvars mismatch")
    }
}

impl<C: Scalar> Sub for &MPoly<C> {
    type Output = MPoly<C>;
    fn sub(self, rhs: Self) -> MPoly<C> {
        self.checked_add(&-rhs).expect("nvars mismatch")
    }
}

impl<C: Scalar> Mul for &MPoly<C> {
    type Output = MPoly<C>;
    fn mul(self, rhs: Self) -> MPoly<C> {
        self.checked_mul(rhs).expect("nvars mismatch")
    }
}

impl<C: Scalar> Neg for &MPoly<C> {
    type Output = MPoly<C>;
    fn neg(self) -> MPoly<C> {
        self.map_coeffs(|c| -c.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Rational};
    use proptest::prelude::*;

    type P = MPoly<Rational>;

    fn x(i: usize, n: usize) -> P {
        P::var(n, i)
    }

    #[test]
    fn basic_products() {
        let p = &x(0, 2) * &x(1, 2);
        assert_eq!(p, P::monomial(&[1, 1], q(1)));
        let s = &x(0, 2) + &x(1, 2);
        let sq = &s * &s;
        let expected = P::from_terms(
            2,
            [
                (Monomial::new(vec![2, 0]), q(1)),
                (Monomial::new(vec![1, 1]), q(2)),
                (Monomial::new(vec![0, 2]), q(1)),
            ],
        );
        assert_eq!(sq, expected);
        assert_eq!(sq.homogeneous_degree(), Some(2));
    }

    #[test]
    fn arity_mismatch_is_an_error() {
        assert!(matches!(
            x(0, 2).checked_mul(&x(0, 3)),
            Err(Error::NvarsMismatch { .. })
        ));
        assert!(matches!(
            x(0, 2).eval(&[q(1)]),
            Err(Error::PointLength { .. })
        ));
        assert!(matches!(
            x(0, 2).partial_derivative(2),
            Err(Error::VariableIndex { .. })
        ));
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(x(0, 2).pow(3).eval(&[q(2), q(1)]).unwrap(), q(8));
        // nodal representative vanishes at its node
        let (x0, x1, x2) = (x(0, 3), x(1, 3), x(2, 3));
        let f = &(&(&x0 * &x1.pow(2)) - &x2.pow(3)) + &(&x0 * &x2.pow(2));
        assert_eq!(f.eval(&[q(1), q(0), q(0)]).unwrap(), q(0));
    }

    #[test]
    fn derivative_example() {
        let p = P::monomial(&[2, 1], q(1));
        assert_eq!(p.partial_derivative(0).unwrap(), P::monomial(&[1, 1], q(2)));
    }

    #[test]
    fn substitution_and_permutation() {
        // (x0 + x1)^2 under x0 -> x1, x1 -> x0 is unchanged
        let s = (&x(0, 2) + &x(1, 2)).pow(2);
        assert_eq!(s.permute_vars(&[1, 0]), s);
        // x0^2 under x0 -> x0 + x1
        let a = vec![vec![q(1), q(1)], vec![q(0), q(1)]];
        assert_eq!(x(0, 2).pow(2).linear_substitution(&a).unwrap(), s);
    }

    fn small_q() -> impl Strategy<Value = Rational> {
        (-20i64..=20, 1i64..=9).prop_map(|(n, d)| crate::scalar::qf(n, d))
    }

    fn poly(nvars: usize) -> impl Strategy<Value = P> {
        prop::collection::vec((prop::collection::vec(0u32..3, nvars), small_q()), 0..6).prop_map(
            move |ts| P::from_terms(nvars, ts.into_iter().map(|(e, c)| (Monomial::new(e), c))),
        )
    }

    fn form(nvars: usize, k: u32) -> impl Strategy<Value = P> {
        let len = monomials_of_degree(nvars, k).len();
        prop::collection::vec(small_q(), len)
            .prop_map(move |c| P::from_dense(nvars, k, &c).unwrap())
    }

    proptest! {
        #[test]
        fn mul_is_commutative_and_associative(a in poly(3), b in poly(3), c in poly(3)) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        }

        #[test]
        fn evaluation_is_a_ring_homomorphism(
            a in poly(3), b in poly(3),
            pts in prop::collection::vec(prop::collection::vec(small_q(), 3), 20)
        ) {
            let prod = &a * &b;
            for pt in pts {
                prop_assert_eq!(prod.eval(&pt).unwrap(), a.eval(&pt).unwrap() * b.eval(&pt).unwrap());
            }
        }

        #[test]
        fn homogeneous_scaling(f in form(3, 3), mu in small_q(), w in prop::collection::vec(small_q(), 3)) {
            let scaled: Vec<Rational> = w.iter().map(|v| v.clone() * mu.clone()).collect();
            let lhs = f.eval(&scaled).unwrap();
            let rhs = pow_scalar(&mu, 3) * f.eval(&w).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn euler_identity(f in form(3, 4)) {
            let mut acc = P::zero(3);
            for (i, g) in f.gradient().iter().enumerate() {
                acc = &acc + &(&x(i, 3) * g);
            }
            prop_assert_eq!(acc, f.scale(&q(4)));
        }

        #[test]
        fn derivative_matches_central_difference(
            f in form(3, 3),
            w in prop::collection::vec(-2.0f64..2.0, 3)
        ) {
            let fc = f.map_coeffs(|c| F64(crate::scalar::rational_to_f64(c)));
            let h = 1e-4;
            for i in 0..3 {
                let mut wp = w.clone();
                let mut wm = w.clone();
                wp[i] += h;
                wm[i] -= h;
                let fd = (eval_f64(&fc, &wp) - eval_f64(&fc, &wm)) / (2.0 * h);
                let exact = eval_f64(&f.partial_derivative(i).unwrap().map_coeffs(|c| F64(crate::scalar::rational_to_f64(c))), &w);
                prop_assert!((fd - exact).abs() <= 1e-6 * (1.0 + exact.abs()));
            }
        }

        #[test]
        fn exact_addition_cancels(a in small_q(), b in small_q()) {
            prop_assert_eq!((a.clone() + b.clone()) - b, a);
        }
    }

    // f64 is not a `Scalar`; evaluate directly.
    fn eval_f64(p: &MPoly<F64>, w: &[f64]) -> f64 {
        p.terms()
            .map(|(m, c)| {
                m.exps()
                    .iter()
                    .zip(w)
                    .fold(c.0, |acc, (&e, x)| acc * x.powi(e as i32))
            })
            .sum()
    }

    use test_f64::F64;
    mod test_f64 {
        //! Minimal real scalar used only by the finite-difference oracle.
        use crate::scalar::{rational_to_f64, Rational, Scalar};
        use num_complex::Complex64;
        use num_traits::{One, Zero};
        use std::ops::{Add, Div, Mul, Neg, Sub};

        #[derive(Debug, Clone, Copy, PartialEq)]
        pub struct F64(pub f64);
        impl Zero for F64 {
            fn zero() -> Self {
                F64(0.0)
            }
            fn is_zero(&self) -> bool {
                self.0 == 0.0
            }
        }
        impl One for F64 {
            fn one() -> Self {
                F64(1.0)
            }
        }
        impl Add for F64 {
            type Output = F64;
            fn add(self, o: F64) -> F64 {
                F64(self.0 + o.0)
            }
        }
        impl Sub for F64 {
            type Output = F64;
            fn sub(self, o: F64) -> F64 {
                F64(self.0 - o.0)
            }
        }
        impl Mul for F64 {
            type Output = F64;
            fn mul(self, o: F64) -> F64 {
                F64(self.0 * o.0)
            }
        }
        impl Div for F64 {
            type Output = F64;
            fn div(self, o: F64) -> F64 {
                F64(self.0 / o.0)
            }
        }
        impl Neg for F64 {
            type Output = F64;
            fn neg(self) -> F64 {
                F64(-self.0)
            }
        }
        impl Scalar for F64 {
            const EXACT: bool = false;
            fn from_rational(q: &Rational) -> Self {
                F64(rational_to_f64(q))
            }
            fn modulus(&self) -> f64 {
                self.0.abs()
            }
            fn to_complex(&self) -> Complex64 {
                Complex64::new(self.0, 0.0)
            }
        }
    }
}
