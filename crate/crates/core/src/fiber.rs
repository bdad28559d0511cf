//! Fibers and Jacobian ranks of the characteristic-polynomial map for
//! binary tensors.
//!
//! For `n = 1` the characteristic polynomial of `T` relative to `t` is
//! `det(lambda I - A)` with `A = M_t^{-1} M_T` linear in the coefficients of
//! `T`, so the map is evaluated through the power sums `tr(A^k)`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::homotopy::{affine_distance, solve_total_degree, SolveReport, System, TrackOptions};
use crate::linalg::Matrix;
use crate::poly::monomials_of_degree;
use crate::resultant::{sylvester_matrix, CharPoly};
use crate::scalar::{Rational, Scalar};
use crate::tensor::{eigencount, PSTensor, SymForm};

/// Coordinates on the domain of the map: coefficients of a symmetric form,
/// or the flat coefficients of a partially symmetric tensor.
pub fn domain_dim(n: usize, d: usize, symmetric: bool) -> usize {
    if symmetric {
        monomials_of_degree(n + 1, d as u32).len()
    } else {
        (n + 1) * monomials_of_degree(n + 1, d as u32 - 1).len()
    }
}

fn tensor_at(n: usize, d: usize, symmetric: bool, x: &[Rational]) -> Result<PSTensor> {
    if symmetric {
        Ok(SymForm::from_dense(n, d, x)?.to_ps())
    } else {
        PSTensor::from_flat(n, d, x)
    }
}

fn require_binary(n: usize, d: usize) -> Result<()> {
    if n != 1 || d < 3 {
        return Err(Error::Unsupported {
            n,
            d,
            reason: "the characteristic-polynomial map is linearized for binary tensors of degree >= 3".into(),
        });
    }
    Ok(())
}

/// `B_j = M_t^{-1} M_{T(e_j)}` for the basis vectors `e_j` of the domain.
pub fn basis_matrices(t: &PSTensor, symmetric: bool) -> Result<Vec<DMatrix<Complex64>>> {
    let (n, d) = (t.n(), t.d());
    require_binary(n, d)?;
    let mt = sylvester_matrix(t)?;
    let dim = domain_dim(n, d, symmetric);
    let mut out = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut e = vec![Rational::from_int(0); dim];
        e[j] = Rational::from_int(1);
        let b = mt
            .solve(&sylvester_matrix(&tensor_at(n, d, symmetric, &e)?)?)
            .ok_or(Error::SingularReference)?;
        out.push(DMatrix::from_fn(b.rows(), b.cols(), |r, c| b[(r, c)].to_complex()));
    }
    Ok(out)
}

/// Power sums `p_1..p_D` of the roots of `lambda^D + c_1 lambda^{D-1} + ...`.
pub fn power_sums(c: &[Complex64]) -> Vec<Complex64> {
    let mut p: Vec<Complex64> = Vec::with_capacity(c.len());
    for k in 1..=c.len() {
        let mut v = c[k - 1] * k as f64;
        for i in 1..k {
            v += c[i - 1] * p[k - i - 1];
        }
        p.push(-v);
    }
    p
}

/// Inverse of [`power_sums`].
pub fn coefficients_from_power_sums(p: &[Complex64]) -> Vec<Complex64> {
    let mut c: Vec<Complex64> = Vec::with_capacity(p.len());
    for k in 1..=p.len() {
        let mut v = p[k - 1];
        for i in 1..k {
            v += c[i - 1] * p[k - i - 1];
        }
        c.push(-v / k as f64);
    }
    c
}

#[derive(Debug, Clone)]
struct SparseMatrix {
    entries: Vec<(usize, usize, Complex64)>,
}

/// `tr(A^k) = P_k` for the lowest `m` values of `k`, in the variables
/// `y = x / s` where `s` is the eigenvalue scale of the target.
struct FiberSystem {
    dense: Vec<DMatrix<Complex64>>,
    sparse: Vec<SparseMatrix>,
    /// Target power sums divided by `s^k`, for all `k = 1..D`.
    targets: Vec<Complex64>,
    degrees: Vec<usize>,
}

impl FiberSystem {
    fn new(basis: Vec<DMatrix<Complex64>>, targets: Vec<Complex64>) -> Self {
        let sparse = basis
            .iter()
            .map(|b| SparseMatrix {
                entries: (0..b.nrows())
                    .flat_map(|r| (0..b.ncols()).map(move |c| (r, c)))
                    .filter(|&(r, c)| b[(r, c)].norm() > 0.0)
                    .map(|(r, c)| (r, c, b[(r, c)]))
                    .collect(),
            })
            .collect();
        let m = basis.len();
        FiberSystem {
            dense: basis,
            sparse,
            targets,
            degrees: (1..=m).collect(),
        }
    }

    fn matrix(&self, y: &[Complex64]) -> DMatrix<Complex64> {
        let size = self.dense[0].nrows();
        let mut a = DMatrix::zeros(size, size);
        for (yj, b) in y.iter().zip(&self.sparse) {
            for &(r, c, v) in &b.entries {
                a[(r, c)] += yj * v;
            }
        }
        a
    }

    /// `A^0, ..., A^upto`.
    fn powers(&self, a: &DMatrix<Complex64>, upto: usize) -> Vec<DMatrix<Complex64>> {
        let mut out = vec![DMatrix::identity(a.nrows(), a.ncols())];
        for k in 1..=upto {
            out.push(&out[k - 1] * a);
        }
        out
    }

    /// Residuals `(tr(A^k) - P_k) / k` for `k = 1..count` and their
    /// Jacobian.
    fn eval_rows(&self, y: &[Complex64], count: usize) -> (DVector<Complex64>, DMatrix<Complex64>) {
        let a = self.matrix(y);
        let pw = self.powers(&a, count);
        let m = y.len();
        let f = DVector::from_fn(count, |i, _| (pw[i + 1].trace() - self.targets[i]) / (i + 1) as f64);
        let j = DMatrix::from_fn(count, m, |i, col| {
            let p = &pw[i];
            self.sparse[col]
                .entries
                .iter()
                .fold(Complex64::new(0.0, 0.0), |acc, &(r, c, v)| acc + p[(c, r)] * v)
        });
        (f, j)
    }

    fn full_residual(&self, y: &[Complex64]) -> f64 {
        let a = self.matrix(y);
        let mut p = DMatrix::identity(a.nrows(), a.ncols());
        let big_d = self.targets.len() as f64;
        let mut worst: f64 = 0.0;
        for t in &self.targets {
            p = &p * &a;
            worst = worst.max((p.trace() - t).norm() / big_d);
        }
        worst
    }

    /// Gauss-Newton on all `D` equations.
    fn polish(&self, y: &[Complex64]) -> Vec<Complex64> {
        let mut best = y.to_vec();
        let mut best_res = self.full_residual(y);
        let mut cur = y.to_vec();
        for _ in 0..10 {
            if best_res < 1e-15 {
                break;
            }
            let (f, j) = self.eval_rows(&cur, self.targets.len());
            let Ok(dx) = j.svd(true, true).solve(&-f, 1e-14) else { break };
            for (c, d) in cur.iter_mut().zip(dx.iter()) {
                *c += d;
            }
            let r = self.full_residual(&cur);
            if r < best_res {
                best_res = r;
                best = cur.clone();
            } else {
                break;
            }
        }
        best
    }
}

impl System for FiberSystem {
    fn nvars(&self) -> usize {
        self.dense.len()
    }

    fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    fn eval(&self, y: &[Complex64]) -> (DVector<Complex64>, DMatrix<Complex64>) {
        self.eval_rows(y, y.len())
    }

    fn residual(&self, y: &[Complex64]) -> f64 {
        let (f, _) = self.eval_rows(y, y.len());
        f.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiberSolution {
    /// Coefficients in the domain coordinates.
    #[serde(serialize_with = "crate::io::ser_complex_vec")]
    pub coeffs: Vec<Complex64>,
    /// Largest of `|tr(A^k) - P_k| / (D s^k)` over `k = 1..D`.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiberReport {
    pub n: usize,
    pub d: usize,
    pub symmetric: bool,
    pub unknowns: usize,
    pub equations: usize,
    pub paths: usize,
    pub failures: usize,
    pub diverged: usize,
    /// Endpoints of the square subsystem, before filtering by the
    /// remaining equations.
    pub square_solutions: usize,
    pub count: usize,
    pub solutions: Vec<FiberSolution>,
}

/// Eigenvalue scale `max_k (|p_k| / D)^{1/k}`.
fn scale_of(p: &[Complex64]) -> f64 {
    let big_d = p.len() as f64;
    let s = p
        .iter()
        .enumerate()
        .map(|(k, v)| (v.norm() / big_d).powf(1.0 / (k + 1) as f64))
        .fold(0.0, f64::max);
    if s > 0.0 {
        s
    } else {
        1.0
    }
}

/// Filter threshold on the full residual for endpoints of the square
/// subsystem.
pub const FIBER_FILTER_TOL: f64 = 1e-6;

/// All symmetric binary forms `T` with characteristic polynomial `phi`
/// relative to `t`.
///
/// The square subsystem consists of the power-sum equations of the lowest
/// degrees `1..m` (`m` unknowns); its endpoints are filtered by all `D`
/// equations and polished by Gauss-Newton on the full system.
pub fn fiber_of_charpoly(phi: &CharPoly<Complex64>, t: &PSTensor, symmetric: bool, opts: &TrackOptions) -> Result<FiberReport> {
    let (n, d) = (t.n(), t.d());
    require_binary(n, d)?;
    if !symmetric {
        return Err(Error::Unsupported {
            n,
            d,
            reason: "fibers are computed for symmetric tensors; partially symmetric fibers are positive dimensional".into(),
        });
    }
    let big_d = eigencount(n, d);
    if phi.degree() != big_d {
        return Err(Error::Shape(format!("characteristic polynomial of degree {} for D = {big_d}", phi.degree())));
    }
    let basis = basis_matrices(t, symmetric)?;
    let m = basis.len();
    if m > big_d {
        return Err(Error::Unsupported {
            n,
            d,
            reason: "more unknowns than equations".into(),
        });
    }
    let p = power_sums(phi.coeffs());
    let s = scale_of(&p);
    let targets: Vec<Complex64> = p.iter().enumerate().map(|(k, v)| v / s.powi(k as i32 + 1)).collect();
    let sys = FiberSystem::new(basis, targets);
    let SolveReport {
        paths,
        failures,
        diverged,
        solutions,
    } = solve_total_degree(&sys, opts)?;
    let square_solutions = solutions.len();
    let mut found: Vec<FiberSolution> = Vec::new();
    for sol in solutions {
        if sys.full_residual(&sol.coords) >= FIBER_FILTER_TOL {
            continue;
        }
        let y = sys.polish(&sol.coords);
        let residual = sys.full_residual(&y);
        let coeffs: Vec<Complex64> = y.iter().map(|c| c * s).collect();
        if found.iter().all(|f| affine_distance(&coeffs, &f.coeffs) >= opts.dedup_tol) {
            found.push(FiberSolution { coeffs, residual });
        }
    }
    Ok(FiberReport {
        n,
        d,
        symmetric,
        unknowns: m,
        equations: big_d,
        paths,
        failures,
        diverged,
        square_solutions,
        count: found.len(),
        solutions: found,
    })
}

/// [`fiber_of_charpoly`] for the characteristic polynomial of `f` relative
/// to the unit tensor.
pub fn fiber_through(f: &SymForm, opts: &TrackOptions) -> Result<FiberReport> {
    let t = PSTensor::unit(f.n(), f.d());
    let phi = crate::resultant::char_poly(&f.to_ps(), &t)?;
    fiber_of_charpoly(&phi.map(Scalar::to_complex), &t, true, opts)
}

/// Characteristic-polynomial coefficients `c_1..c_D` at a real point.
pub fn charpoly_map(basis: &[DMatrix<Complex64>], x: &[f64]) -> Vec<f64> {
    let size = basis[0].nrows();
    let mut a = DMatrix::<Complex64>::zeros(size, size);
    for (xj, b) in x.iter().zip(basis) {
        a += b * Complex64::new(*xj, 0.0);
    }
    let mut p = Vec::with_capacity(size);
    let mut pw = DMatrix::identity(size, size);
    for _ in 0..size {
        pw = &pw * &a;
        p.push(pw.trace());
    }
    coefficients_from_power_sums(&p).iter().map(|c| c.re).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankReport {
    pub n: usize,
    pub d: usize,
    pub symmetric: bool,
    pub domain_dim: usize,
    pub codomain_dim: usize,
    pub rank: usize,
    pub singular_values: Vec<f64>,
}

pub const FD_STEP: f64 = 1e-5;
pub const RANK_TOL: f64 = 1e-8;

/// Central-difference Jacobian of the coefficient map at `base`.
pub fn jacobian_fd(basis: &[DMatrix<Complex64>], base: &[f64]) -> DMatrix<f64> {
    let big_d = basis[0].nrows();
    let m = base.len();
    let mut j = DMatrix::zeros(big_d, m);
    for col in 0..m {
        let mut xp = base.to_vec();
        let mut xm = base.to_vec();
        xp[col] += FD_STEP;
        xm[col] -= FD_STEP;
        let (cp, cm) = (charpoly_map(basis, &xp), charpoly_map(basis, &xm));
        for row in 0..big_d {
            j[(row, col)] = (cp[row] - cm[row]) / (2.0 * FD_STEP);
        }
    }
    j
}

/// Numeric rank of the Jacobian of `T -> (c_1(T), ..., c_D(T))` at `base`.
///
/// Rows are scaled to unit length before the singular values are
/// thresholded at `RANK_TOL * sigma_max`; the coefficients `c_k` have
/// degree `k`, and without equilibration their scales differ by orders of
/// magnitude.
pub fn jacobian_rank(base: &[Rational], t: &PSTensor, symmetric: bool) -> Result<RankReport> {
    let (n, d) = (t.n(), t.d());
    let dim = domain_dim(n, d, symmetric);
    if base.len() != dim {
        return Err(Error::PointLength { expected: dim, got: base.len() });
    }
    let basis = basis_matrices(t, symmetric)?;
    let x: Vec<f64> = base.iter().map(|c| c.to_complex().re).collect();
    let mut j = jacobian_fd(&basis, &x);
    for mut row in j.row_iter_mut() {
        let norm = row.norm();
        if norm > 0.0 {
            row /= norm;
        }
    }
    let sv: Vec<f64> = j.singular_values().iter().copied().collect();
    let max = sv.iter().copied().fold(0.0, f64::max);
    let rank = sv.iter().filter(|&&v| v > RANK_TOL * max).count();
    let mut singular_values = sv;
    singular_values.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    Ok(RankReport {
        n,
        d,
        symmetric,
        domain_dim: dim,
        codomain_dim: eigencount(n, d),
        rank,
        singular_values,
    })
}

/// A base point with small rational coordinates.
pub fn random_base_point<R: rand::Rng>(rng: &mut R, n: usize, d: usize, symmetric: bool) -> Vec<Rational> {
    (0..domain_dim(n, d, symmetric))
        .map(|_| Rational::new(rng.random_range(-5..=5i64).into(), rng.random_range(1..=5i64).into()))
        .collect()
}

/// `M` as a rational matrix, for tests and diagnostics.
pub fn exact_matrix_at(t: &PSTensor, symmetric: bool, x: &[Rational]) -> Result<Matrix<Rational>> {
    let (n, d) = (t.n(), t.d());
    let mt = sylvester_matrix(t)?;
    mt.solve(&sylvester_matrix(&tensor_at(n, d, symmetric, x)?)?)
        .ok_or(Error::SingularReference)
}
