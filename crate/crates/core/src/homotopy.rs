//! Total-degree homotopy continuation for square polynomial systems.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::MPoly;
use crate::random;

/// A square system `F: C^m -> C^m` with known equation degrees.
pub trait System {
    fn nvars(&self) -> usize;
    fn degrees(&self) -> &[usize];
    /// Values and Jacobian at `x`.
    fn eval(&self, x: &[Complex64]) -> (DVector<Complex64>, DMatrix<Complex64>);
    /// Scale-free residual of `x` as an approximate solution.
    fn residual(&self, x: &[Complex64]) -> f64;
}

#[derive(Debug, Clone)]
pub struct SquareSystem {
    nvars: usize,
    equations: Vec<MPoly<Complex64>>,
    degrees: Vec<usize>,
    jacobian: Vec<Vec<MPoly<Complex64>>>,
}

impl SquareSystem {
    pub fn new(equations: Vec<MPoly<Complex64>>) -> Result<Self> {
        let nvars = equations.first().map_or(0, MPoly::nvars);
        if nvars == 0 || equations.len() != nvars {
            return Err(Error::Shape(format!("{} equations in {nvars} unknowns", equations.len())));
        }
        let mut degrees = Vec::new();
        for e in &equations {
            if e.nvars() != nvars {
                return Err(Error::NvarsMismatch { left: nvars, right: e.nvars() });
            }
            match e.total_degree() {
                Some(k) if k >= 1 => degrees.push(k as usize),
                _ => return Err(Error::ConstantPolynomial),
            }
        }
        let jacobian = equations
            .iter()
            .map(|e| (0..nvars).map(|j| e.partial_derivative(j)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        Ok(SquareSystem {
            nvars,
            equations,
            degrees,
            jacobian,
        })
    }

    pub fn equations(&self) -> &[MPoly<Complex64>] {
        &self.equations
    }
}

impl System for SquareSystem {
    fn nvars(&self) -> usize {
        self.nvars
    }

    fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    fn eval(&self, x: &[Complex64]) -> (DVector<Complex64>, DMatrix<Complex64>) {
        let m = self.nvars;
        let f = DVector::from_iterator(m, self.equations.iter().map(|e| e.eval(x).expect("length checked")));
        let j = DMatrix::from_fn(m, m, |i, k| self.jacobian[i][k].eval(x).expect("length checked"));
        (f, j)
    }

    fn residual(&self, x: &[Complex64]) -> f64 {
        self.equations
            .iter()
            .map(|e| {
                let scale: f64 = e
                    .terms()
                    .map(|(mono, c)| {
                        c.norm()
                            * mono
                                .exps()
                                .iter()
                                .zip(x)
                                .map(|(&k, xi)| xi.norm().powi(k as i32))
                                .product::<f64>()
                    })
                    .sum();
                e.eval(x).expect("length checked").norm() / (1.0 + scale)
            })
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackOptions {
    pub min_step: f64,
    pub max_step: f64,
    pub max_corrector: usize,
    pub corrector_tol: f64,
    pub divergence: f64,
    pub dedup_tol: f64,
    pub seed: u64,
}

impl Default for TrackOptions {
    fn default() -> Self {
        TrackOptions {
            min_step: 1e-10,
            max_step: 0.1,
            max_corrector: 3,
            corrector_tol: 1e-6,
            divergence: 1e8,
            dedup_tol: 1e-6,
            seed: 0x5eed_0005,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathSolution {
    #[serde(serialize_with = "crate::io::ser_complex_vec")]
    pub coords: Vec<Complex64>,
    pub residual: f64,
    pub converged: bool,
    pub diverged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub paths: usize,
    pub failures: usize,
    pub diverged: usize,
    /// Converged, deduplicated endpoints.
    pub solutions: Vec<PathSolution>,
}

struct Homotopy<'a, S: System> {
    target: &'a S,
    gamma: Complex64,
    start_consts: Vec<Complex64>,
}

impl<S: System> Homotopy<'_, S> {
    fn start(&self, x: &[Complex64]) -> (DVector<Complex64>, DMatrix<Complex64>) {
        let m = x.len();
        let deg = self.target.degrees();
        let g = DVector::from_fn(m, |i, _| x[i].powu(deg[i] as u32) - self.start_consts[i]);
        let jg = DMatrix::from_fn(m, m, |i, k| {
            if i == k {
                x[i].powu(deg[i] as u32 - 1) * deg[i] as f64
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        (g, jg)
    }

    /// `H`, `dH/dx` and `dH/ds` at `(x, s)`.
    fn eval(&self, x: &[Complex64], s: f64) -> (DVector<Complex64>, DMatrix<Complex64>, DVector<Complex64>) {
        let (f, jf) = self.target.eval(x);
        let (g, jg) = self.start(x);
        let a = self.gamma * (1.0 - s);
        let h = &g * a + &f * Complex64::new(s, 0.0);
        let jh = &jg * a + &jf * Complex64::new(s, 0.0);
        let hs = &f - &g * self.gamma;
        (h, jh, hs)
    }
}

fn norm(x: &[Complex64]) -> f64 {
    x.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

fn solve(j: DMatrix<Complex64>, rhs: DVector<Complex64>) -> Option<DVector<Complex64>> {
    let x = j.lu().solve(&rhs)?;
    x.iter().all(|c| c.re.is_finite() && c.im.is_finite()).then_some(x)
}

/// Newton on the target system until the step stalls; returns the best point.
pub fn newton_polish<S: System>(sys: &S, x: &[Complex64], iters: usize) -> Vec<Complex64> {
    let mut best = x.to_vec();
    let mut best_res = sys.residual(x);
    let mut cur = x.to_vec();
    for _ in 0..iters {
        if best_res < 1e-14 {
            break;
        }
        let (f, j) = sys.eval(&cur);
        let Some(dx) = solve(j, -f) else { break };
        for (c, d) in cur.iter_mut().zip(dx.iter()) {
            *c += d;
        }
        let r = sys.residual(&cur);
        if r < best_res {
            best_res = r;
            best = cur.clone();
        } else if r > 1e3 * best_res {
            break;
        }
    }
    best
}

fn track<S: System>(hom: &Homotopy<S>, x0: Vec<Complex64>, opts: &TrackOptions) -> PathSolution {
    let mut x = x0;
    let mut s = 0.0f64;
    let mut h = 0.01f64;
    let mut successes = 0;
    let failed = |x: Vec<Complex64>, diverged: bool| PathSolution {
        residual: f64::INFINITY,
        coords: x,
        converged: false,
        diverged,
    };
    while s < 1.0 {
        h = h.min(1.0 - s);
        let (_, jh, hs) = hom.eval(&x, s);
        let ok = solve(jh, -hs).and_then(|dx| {
            let s1 = s + h;
            let mut x1: Vec<Complex64> = x.iter().zip(dx.iter()).map(|(a, b)| a + b * h).collect();
            let moved = h * dx.norm();
            for it in 0..opts.max_corrector {
                let (hv, jh, _) = hom.eval(&x1, s1);
                let delta = solve(jh, -hv)?;
                // a large first correction means the predictor left the path
                if it == 0 && delta.norm() > 0.5 * moved + opts.corrector_tol * (1.0 + norm(&x1)) {
                    return None;
                }
                for (c, d) in x1.iter_mut().zip(delta.iter()) {
                    *c += d;
                }
                if delta.norm() <= opts.corrector_tol * (1.0 + norm(&x1)) {
                    return Some((x1, s1));
                }
            }
            None
        });
        match ok {
            Some((x1, s1)) => {
                x = x1;
                s = if s1 >= 1.0 - 1e-15 { 1.0 } else { s1 };
                successes += 1;
                if successes >= 3 {
                    h = (2.0 * h).min(opts.max_step);
                    successes = 0;
                }
                if norm(&x) > opts.divergence {
                    return failed(x, true);
                }
            }
            None => {
                h /= 2.0;
                successes = 0;
                if h < opts.min_step {
                    let big = norm(&x) > opts.divergence.sqrt();
                    return failed(x, big);
                }
            }
        }
    }
    let x = newton_polish(hom.target, &x, 20);
    let residual = hom.target.residual(&x);
    PathSolution {
        converged: residual < 1e-8,
        diverged: false,
        residual,
        coords: x,
    }
}

/// Distance used for deduplication: `max |x_i - y_i| / max(1, |y|_inf)`.
pub fn affine_distance(x: &[Complex64], y: &[Complex64]) -> f64 {
    let scale = y.iter().map(|c| c.norm()).fold(1.0, f64::max);
    x.iter().zip(y).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max) / scale
}

pub fn dedup_solutions(sols: Vec<PathSolution>, tol: f64) -> Vec<PathSolution> {
    let mut out: Vec<PathSolution> = Vec::new();
    for s in sols {
        if let Some(prev) = out.iter_mut().find(|p| affine_distance(&s.coords, &p.coords) < tol) {
            if s.residual < prev.residual {
                *prev = s;
            }
        } else {
            out.push(s);
        }
    }
    out
}

fn start_points(degrees: &[usize], consts: &[Complex64]) -> Vec<Vec<Complex64>> {
    let mut out = vec![Vec::new()];
    for (&k, r) in degrees.iter().zip(consts) {
        let root = r.powf(1.0 / k as f64);
        let mut next = Vec::with_capacity(out.len() * k);
        for p in &out {
            for j in 0..k {
                let mut q = p.clone();
                q.push(root * Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / k as f64));
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// Tracks all `prod d_i` paths from `x_i^{d_i} = r_i` with `r_i` and `gamma`
/// random on the unit circle.
pub fn solve_total_degree<S: System>(sys: &S, opts: &TrackOptions) -> Result<SolveReport> {
    let m = sys.nvars();
    if sys.degrees().len() != m || sys.degrees().contains(&0) {
        return Err(Error::Shape("square system with positive degrees expected".into()));
    }
    let mut rng = random::rng(opts.seed);
    let mut unit = || Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
    let gamma = unit();
    let start_consts: Vec<Complex64> = (0..m).map(|_| unit()).collect();
    let hom = Homotopy {
        target: sys,
        gamma,
        start_consts: start_consts.clone(),
    };
    let starts = start_points(sys.degrees(), &start_consts);
    let paths = starts.len();
    let ends: Vec<PathSolution> = starts.into_iter().map(|x0| track(&hom, x0, opts)).collect();
    let diverged = ends.iter().filter(|p| p.diverged).count();
    let failures = ends.iter().filter(|p| !p.converged && !p.diverged).count();
    let solutions = dedup_solutions(ends.into_iter().filter(|p| p.converged).collect(), opts.dedup_tol);
    Ok(SolveReport {
        paths,
        failures,
        diverged,
        solutions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn system(texts: &[&str]) -> SquareSystem {
        let m = texts.len();
        SquareSystem::new(
            texts
                .iter()
                .map(|t| parse_poly(t, m).unwrap().map_coeffs(crate::scalar::Scalar::to_complex))
                .collect(),
        )
        .unwrap()
    }

    fn sorted_re(sols: &[PathSolution]) -> Vec<Vec<f64>> {
        let mut v: Vec<Vec<f64>> = sols.iter().map(|s| s.coords.iter().map(|c| (c.re * 1e6).round() / 1e6).collect()).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    #[test]
    fn univariate_quadratic() {
        let r = solve_total_degree(&system(&["x0^2-1"]), &TrackOptions::default()).unwrap();
        assert_eq!(r.paths, 2);
        assert_eq!(sorted_re(&r.solutions), vec![vec![-1.0], vec![1.0]]);
    }

    #[test]
    fn circle_and_line() {
        let r = solve_total_degree(&system(&["x0^2+x1^2-2", "x0-x1"]), &TrackOptions::default()).unwrap();
        assert_eq!(sorted_re(&r.solutions), vec![vec![-1.0, -1.0], vec![1.0, 1.0]]);
        for s in &r.solutions {
            assert!(s.residual < 1e-12);
            assert!(s.coords.iter().all(|c| c.im.abs() < 1e-8));
        }
    }

    /// Relative size of the Sylvester resultant in `x1` of two quadrics,
    /// evaluated at `x0`.
    fn eliminant_at(eqs: &[MPoly<Complex64>], x0: Complex64) -> f64 {
        let coeffs = |e: &MPoly<Complex64>| -> Vec<Complex64> {
            let mut c = vec![Complex64::new(0.0, 0.0); 3];
            for (m, v) in e.terms() {
                c[m.exps()[1] as usize] += v * x0.powu(m.exps()[0]);
            }
            c
        };
        let (a, b) = (coeffs(&eqs[0]), coeffs(&eqs[1]));
        let z = Complex64::new(0.0, 0.0);
        let m = DMatrix::from_row_slice(
            4,
            4,
            &[a[2], a[1], a[0], z, z, a[2], a[1], a[0], b[2], b[1], b[0], z, z, b[2], b[1], b[0]],
        );
        let scale: f64 = m.iter().map(|c| c.norm()).fold(1.0, f64::max);
        m.determinant().norm() / scale.powi(4)
    }

    #[test]
    fn dense_quadric_pair_has_four_solutions() {
        let mut rng = random::rng(51);
        for seed in 0..3 {
            let eqs: Vec<MPoly<Complex64>> = (0..2)
                .map(|_| {
                    let mut p = MPoly::zero(2);
                    for deg in 0..=2 {
                        p = &p + &random::form(&mut rng, 2, deg);
                    }
                    p.map_coeffs(crate::scalar::Scalar::to_complex)
                })
                .collect();
            let sys = SquareSystem::new(eqs.clone()).unwrap();
            let opts = TrackOptions { seed, ..Default::default() };
            let r = solve_total_degree(&sys, &opts).unwrap();
            assert_eq!(r.solutions.len(), 4, "{r:?}");
            for s in &r.solutions {
                assert!(sys.residual(&s.coords) < 1e-10);
                assert!(eliminant_at(&eqs, s.coords[0]) < 1e-8, "x0 is not a root of the eliminant");
            }
        }
    }

    #[test]
    fn paths_to_infinity_are_dropped() {
        // two parallel lines and a line: one finite solution of two paths
        let r = solve_total_degree(&system(&["x0*x1-1", "x0-1"]), &TrackOptions::default()).unwrap();
        assert_eq!(r.paths, 2);
        assert_eq!(sorted_re(&r.solutions), vec![vec![1.0, 1.0]]);
        assert_eq!(r.failures + r.diverged, 1, "{r:?}");
    }

    #[test]
    fn shape_errors() {
        let x: MPoly<Complex64> = parse_poly("x0", 2).unwrap().map_coeffs(crate::scalar::Scalar::to_complex);
        assert!(SquareSystem::new(vec![x]).is_err());
        let c: MPoly<Complex64> = parse_poly("1", 1).unwrap().map_coeffs(crate::scalar::Scalar::to_complex);
        assert!(SquareSystem::new(vec![c]).is_err());
    }
}
