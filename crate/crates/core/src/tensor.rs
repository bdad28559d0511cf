//! Partially symmetric tensors `T in V (x) S^{d-1} W*`, symmetric forms and
//! dense coordinate arrays.

use crate::error::{Error, Result};
use crate::poly::{monomials_of_degree, MPoly, Monomial};
use crate::scalar::{Rational, Scalar};

/// Generic number of eigenvalues, `(n+1)(d-1)^n`.
pub fn eigencount(n: usize, d: usize) -> usize {
    (n + 1) * (d - 1).pow(n as u32)
}

/// A tensor stored as the `n+1` forms `f_0, ..., f_n` of degree `d-1` in
/// `n+1` variables, i.e. the polynomial map `w -> (f_0(w), ..., f_n(w))`.
#[derive(Debug, Clone, PartialEq)]
pub struct PSTensor<C = Rational> {
    n: usize,
    d: usize,
    components: Vec<MPoly<C>>,
}

impl<C: Scalar> PSTensor<C> {
    pub fn new(n: usize, d: usize, components: Vec<MPoly<C>>) -> Result<Self> {
        if n < 1 || d < 2 {
            return Err(Error::Shape(format!("need n >= 1 and d >= 2, got ({n}, {d})")));
        }
        if components.len() != n + 1 {
            return Err(Error::Shape(format!(
                "expected {} components, got {}",
                n + 1,
                components.len()
            )));
        }
        for (i, f) in components.iter().enumerate() {
            if f.nvars() != n + 1 {
                return Err(Error::NvarsMismatch {
                    left: f.nvars(),
                    right: n + 1,
                });
            }
            if !f.is_homogeneous_of(d as u32 - 1) {
                return Err(Error::Shape(format!(
                    "component {i} is not homogeneous of degree {}",
                    d - 1
                )));
            }
        }
        Ok(PSTensor { n, d, components })
    }

    /// The unit tensor `(x_0^{d-1}, ..., x_n^{d-1})`.
    pub fn unit(n: usize, d: usize) -> Self {
        let components = (0..=n)
            .map(|i| {
                let mut e = vec![0; n + 1];
                e[i] = d as u32 - 1;
                MPoly::monomial(&e, C::one())
            })
            .collect();
        PSTensor { n, d, components }
    }

    pub fn zero(n: usize, d: usize) -> Self {
        PSTensor {
            n,
            d,
            components: vec![MPoly::zero(n + 1); n + 1],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn nvars(&self) -> usize {
        self.n + 1
    }

    pub fn components(&self) -> &[MPoly<C>] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &MPoly<C> {
        &self.components[i]
    }

    /// `(f_0(w), ..., f_n(w))`.
    pub fn contract(&self, w: &[C]) -> Result<Vec<C>> {
        self.components.iter().map(|f| f.eval(w)).collect()
    }

    pub fn map_coeffs<D: Scalar>(&self, f: impl Fn(&C) -> D) -> PSTensor<D> {
        PSTensor {
            n: self.n,
            d: self.d,
            components: self.components.iter().map(|p| p.map_coeffs(&f)).collect(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map_components(|f| f.scale(c))
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, other: &Self, c: &C) -> Result<Self> {
        self.check_shape(other)?;
        Ok(PSTensor {
            n: self.n,
            d: self.d,
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + &b.scale(c))
                .collect(),
        })
    }

    pub fn map_components(&self, f: impl Fn(&MPoly<C>) -> MPoly<C>) -> Self {
        PSTensor {
            n: self.n,
            d: self.d,
            components: self.components.iter().map(f).collect(),
        }
    }

    pub fn check_shape(&self, other: &Self) -> Result<()> {
        if self.n != other.n || self.d != other.d {
            return Err(Error::Shape(format!(
                "tensor shapes ({}, {}) and ({}, {}) differ",
                self.n, self.d, other.n, other.d
            )));
        }
        Ok(())
    }

    /// Coefficients of all components, block by block, each block in
    /// descending graded-lex order.
    pub fn to_flat(&self) -> Vec<C> {
        self.components
            .iter()
            .flat_map(|f| f.to_dense(self.d as u32 - 1))
            .collect()
    }

    pub fn from_flat(n: usize, d: usize, coeffs: &[C]) -> Result<Self> {
        let block = monomials_of_degree(n + 1, d as u32 - 1).len();
        if coeffs.len() != (n + 1) * block {
            return Err(Error::Shape(format!(
                "expected {} coefficients, got {}",
                (n + 1) * block,
                coeffs.len()
            )));
        }
        let components = coeffs
            .chunks(block)
            .map(|c| MPoly::from_dense(n + 1, d as u32 - 1, c))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, d, components)
    }

    pub fn max_coeff(&self) -> f64 {
        self.components.iter().map(MPoly::max_coeff).fold(0.0, f64::max)
    }
}

/// A symmetric tensor, i.e. a form of degree `d` in `n+1` variables.
#[derive(Debug, Clone, PartialEq)]
pub struct SymForm<C = Rational> {
    n: usize,
    d: usize,
    form: MPoly<C>,
}

impl<C: Scalar> SymForm<C> {
    pub fn new(n: usize, d: usize, form: MPoly<C>) -> Result<Self> {
        if form.nvars() != n + 1 {
            return Err(Error::NvarsMismatch {
                left: form.nvars(),
                right: n + 1,
            });
        }
        if !form.is_homogeneous_of(d as u32) {
            return Err(Error::Shape(format!("form is not homogeneous of degree {d}")));
        }
        Ok(SymForm { n, d, form })
    }

    /// `sum_i x_i^d`, the symmetric form of the unit tensor.
    pub fn fermat(n: usize, d: usize) -> Self {
        let mut form = MPoly::zero(n + 1);
        for i in 0..=n {
            let mut e = vec![0; n + 1];
            e[i] = d as u32;
            form.add_term(Monomial::new(e), C::one());
        }
        SymForm { n, d, form }
    }

    pub fn from_dense(n: usize, d: usize, coeffs: &[C]) -> Result<Self> {
        Self::new(n, d, MPoly::from_dense(n + 1, d as u32, coeffs)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn form(&self) -> &MPoly<C> {
        &self.form
    }

    pub fn to_dense(&self) -> Vec<C> {
        self.form.to_dense(self.d as u32)
    }

    pub fn map_coeffs<D: Scalar>(&self, f: impl Fn(&C) -> D) -> SymForm<D> {
        SymForm {
            n: self.n,
            d: self.d,
            form: self.form.map_coeffs(f),
        }
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, other: &Self, c: &C) -> Self {
        SymForm {
            n: self.n,
            d: self.d,
            form: &self.form + &other.form.scale(c),
        }
    }

    /// The components `f_i = (1/d) df/dx_i`.
    pub fn to_ps(&self) -> PSTensor<C> {
        let inv = C::one() / C::from_int(self.d as i64);
        let components = (0..=self.n)
            .map(|i| {
                self.form
                    .partial_derivative(i)
                    .expect("index in range")
                    .scale(&inv)
            })
            .collect();
        PSTensor {
            n: self.n,
            d: self.d,
            components,
        }
    }
}

/// Shorthand for [`SymForm::to_ps`].
pub fn symmetric_to_ps<C: Scalar>(f: &SymForm<C>) -> PSTensor<C> {
    f.to_ps()
}

/// A full coordinate array `A[i_1, ..., i_d]`, each index in `0..=n`,
/// stored with the first index slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseTensor<C = Rational> {
    n: usize,
    d: usize,
    entries: Vec<C>,
}

impl<C: Scalar> DenseTensor<C> {
    pub fn new(n: usize, d: usize, entries: Vec<C>) -> Result<Self> {
        if d > 4 || !(1..=3).contains(&n) || d < 2 {
            return Err(Error::Unsupported {
                n,
                d,
                reason: "dense tensors are limited to d <= 4, n <= 3".into(),
            });
        }
        let expected = (n + 1).pow(d as u32);
        if entries.len() != expected {
            return Err(Error::Shape(format!(
                "expected {expected} entries, got {}",
                entries.len()
            )));
        }
        Ok(DenseTensor { n, d, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn entries(&self) -> &[C] {
        &self.entries
    }

    pub fn get(&self, index: &[usize]) -> &C {
        let flat = index.iter().fold(0, |acc, &i| acc * (self.n + 1) + i);
        &self.entries[flat]
    }

    /// Array with 1 on the diagonal.
    pub fn unit(n: usize, d: usize) -> Result<Self> {
        let m = n + 1;
        let mut entries = vec![C::zero(); m.pow(d as u32)];
        for i in 0..m {
            let flat = (0..d).fold(0, |acc, _| acc * m + i);
            entries[flat] = C::one();
        }
        Self::new(n, d, entries)
    }

    /// `pi_S(A)`: the average of `A` over all orderings of its last `d-1`
    /// indices.
    pub fn symmetrize_tail(&self) -> Self {
        let m = self.n + 1;
        let decode = |flat: usize| {
            let mut idx = vec![0; self.d];
            let mut rest = flat;
            for slot in idx.iter_mut().rev() {
                *slot = rest % m;
                rest /= m;
            }
            idx[1..].sort_unstable();
            idx
        };
        let mut groups: std::collections::HashMap<Vec<usize>, (C, usize)> = std::collections::HashMap::new();
        for (flat, c) in self.entries.iter().enumerate() {
            let e = groups.entry(decode(flat)).or_insert((C::zero(), 0));
            e.0 = e.0.clone() + c.clone();
            e.1 += 1;
        }
        let entries = (0..self.entries.len())
            .map(|flat| {
                let (sum, count) = &groups[&decode(flat)];
                sum.clone() / C::from_int(*count as i64)
            })
            .collect();
        DenseTensor {
            n: self.n,
            d: self.d,
            entries,
        }
    }
}

/// `f_{i1}(x) = sum A[i1, i2, ..., id] x_{i2} ... x_{id}`. Only the
/// symmetrization of `A` over its last `d-1` slots survives.
pub fn project_partially_symmetric<C: Scalar>(a: &DenseTensor<C>) -> PSTensor<C> {
    let m = a.n + 1;
    let tail = m.pow(a.d as u32 - 1);
    let components = (0..m)
        .map(|i| {
            let mut f = MPoly::zero(m);
            for t in 0..tail {
                let c = &a.entries[i * tail + t];
                if c.is_zero() {
                    continue;
                }
                let mut e = vec![0u32; m];
                let mut rest = t;
                for _ in 0..a.d - 1 {
                    e[rest % m] += 1;
                    rest /= m;
                }
                f.add_term(Monomial::new(e), c.clone());
            }
            f
        })
        .collect();
    PSTensor {
        n: a.n,
        d: a.d,
        components,
    }
}
