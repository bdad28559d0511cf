//! Small dense matrices and determinants.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::scalar::{Rational, Scalar};

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<C> {
    rows: usize,
    cols: usize,
    data: Vec<C>,
}

impl<C: Scalar> Matrix<C> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![C::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<C>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[C] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<D: Scalar>(&self, f: impl Fn(&C) -> D) -> Matrix<D> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Submatrix keeping the listed rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                m[(i, j)] = self[(r, c)].clone();
            }
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out[(i, j)].clone() + a.clone() * other[(k, j)].clone();
                    out[(i, j)] = v;
                }
            }
        }
        out
    }

    pub fn det(&self) -> C {
        assert!(self.is_square(), "determinant of a non-square matrix");
        C::determinant(self)
    }

    /// Rank by Gaussian elimination. Exact for exact domains; for floating
    /// domains entries below `1e-12` times the largest entry count as zero.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let scale = self.data.iter().map(Scalar::modulus).fold(0.0, f64::max);
        let negligible = |v: &C| {
            if C::EXACT {
                v.is_zero()
            } else {
                v.modulus() <= 1e-12 * scale
            }
        };
        let mut rank = 0;
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let pivot = (rank..m.rows)
                .filter(|&r| !negligible(&m[(r, col)]))
                .max_by(|&a, &b| m[(a, col)].modulus().total_cmp(&m[(b, col)].modulus()));
            let Some(p) = pivot else { continue };
            m.swap_rows(p, rank);
            let inv = C::one() / m[(rank, col)].clone();
            for r in rank + 1..m.rows {
                let factor = m[(r, col)].clone() * inv.clone();
                if factor.is_zero() {
                    continue;
                }
                for c in col..m.cols {
                    let v = m[(r, c)].clone() - factor.clone() * m[(rank, c)].clone();
                    m[(r, c)] = v;
                }
            }
            rank += 1;
        }
        rank
    }

    /// Basis of the right kernel (exact domains).
    pub fn nullspace(&self) -> Vec<Vec<C>> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(p, r);
            let inv = C::one() / m[(r, col)].clone();
            for c in 0..m.cols {
                let v = m[(r, c)].clone() * inv.clone();
                m[(r, c)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, col)].is_zero() {
                    continue;
                }
                let f = m[(i, col)].clone();
                for c in 0..m.cols {
                    let v = m[(i, c)].clone() - f.clone() * m[(r, c)].clone();
                    m[(i, c)] = v;
                }
            }
            pivots.push(col);
            r += 1;
        }
        let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![C::zero(); m.cols];
                v[fc] = C::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -m[(row, fc)].clone();
                }
                v
            })
            .collect()
    }

    /// `X` with `self * X = rhs`, or `None` when `self` is singular.
    pub fn solve(&self, rhs: &Self) -> Option<Self> {
        assert!(self.is_square() && rhs.rows == self.rows);
        let n = self.rows;
        let mut a = self.clone();
        let mut b = rhs.clone();
        for col in 0..n {
            let p = if C::EXACT {
                (col..n).find(|&r| !a[(r, col)].is_zero())
            } else {
                (col..n)
                    .max_by(|&x, &y| a[(x, col)].modulus().total_cmp(&a[(y, col)].modulus()))
                    .filter(|&r| !a[(r, col)].is_zero())
            }?;
            a.swap_rows(p, col);
            b.swap_rows(p, col);
            let inv = C::one() / a[(col, col)].clone();
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let f = a[(r, col)].clone() * inv.clone();
                for c in col..n {
                    let v = a[(r, c)].clone() - f.clone() * a[(col, c)].clone();
                    a[(r, c)] = v;
                }
                for c in 0..b.cols {
                    let v = b[(r, c)].clone() - f.clone() * b[(col, c)].clone();
                    b[(r, c)] = v;
                }
            }
        }
        for r in 0..n {
            let inv = C::one() / a[(r, r)].clone();
            for c in 0..b.cols {
                let v = b[(r, c)].clone() * inv.clone();
                b[(r, c)] = v;
            }
        }
        Some(b)
    }

    pub fn trace(&self) -> C {
        (0..self.rows.min(self.cols)).fold(C::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    /// Coefficients `c_1, ..., c_n` of `det(lambda I - self) = lambda^n +
    /// c_1 lambda^{n-1} + ... + c_n`, by the Faddeev-LeVerrier recursion.
    pub fn char_poly_coeffs(&self) -> Vec<C> {
        assert!(self.is_square());
        let n = self.rows;
        let mut out = Vec::with_capacity(n);
        let mut m = Self::identity(n);
        for k in 1..=n {
            let am = self.mul(&m);
            let c = -(am.trace() / C::from_int(k as i64));
            out.push(c.clone());
            m = am;
            for i in 0..n {
                let v = m[(i, i)].clone() + c.clone();
                m[(i, i)] = v;
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

impl<C> std::ops::Index<(usize, usize)> for Matrix<C> {
    type Output = C;
    fn index(&self, (r, c): (usize, usize)) -> &C {
        &self.data[r * self.cols + c]
    }
}

impl<C> std::ops::IndexMut<(usize, usize)> for Matrix<C> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C {
        &mut self.data[r * self.cols + c]
    }
}

/// Gaussian elimination. Inexact domains use partial pivoting on modulus;
/// exact domains take the first nonzero pivot.
pub fn det_gauss<C: Scalar>(m: &Matrix<C>) -> C {
    let n = m.rows;
    let mut a = m.clone();
    let mut det = C::one();
    for col in 0..n {
        let pivot = if C::EXACT {
            (col..n).find(|&r| !a[(r, col)].is_zero())
        } else {
            (col..n)
                .max_by(|&x, &y| a[(x, col)].modulus().total_cmp(&a[(y, col)].modulus()))
                .filter(|&r| !a[(r, col)].is_zero())
        };
        let Some(p) = pivot else { return C::zero() };
        if p != col {
            a.swap_rows(p, col);
            det = -det;
        }
        let piv = a[(col, col)].clone();
        det = det * piv.clone();
        let inv = C::one() / piv;
        for r in col + 1..n {
            let factor = a[(r, col)].clone() * inv.clone();
            if factor.is_zero() {
                continue;
            }
            for c in col + 1..n {
                let v = a[(r, c)].clone() - factor.clone() * a[(col, c)].clone();
                a[(r, c)] = v;
            }
        }
    }
    det
}

/// Fraction-free (Bareiss) determinant over the rationals: every row is
/// scaled to integers, the integer determinant is computed with exact
/// divisions only, and the row scalings are divided back out.
pub fn det_bareiss_rational(m: &Matrix<Rational>) -> Rational {
    let n = m.rows;
    if n == 0 {
        return Rational::one();
    }
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for r in 0..n {
        let row = m.row(r);
        let lcm = row
            .iter()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        scale *= &lcm;
        a.push(
            row.iter()
                .map(|v| v.numer() * (&lcm / v.denom()))
                .collect(),
        );
    }
    let det = bareiss_integer(a);
    Rational::new(det, scale)
}

/// Bareiss elimination on an integer matrix.
pub fn bareiss_integer(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = 1;
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}
