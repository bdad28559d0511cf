//! Simultaneous root finding (Aberth–Ehrlich) with multiplicity detection.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::monomial::binomial;
use crate::poly::upoly::UPoly;
use crate::scalar::{Rational, Scalar};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootOptions {
    /// Relative backward residual `|p(z)| / sum |a_k||z|^k` accepted as
    /// converged.
    pub tol: f64,
    /// Roots closer than this (relative to `max(1, |z|)`) are merged into
    /// one root with multiplicity.
    pub cluster_radius: f64,
    pub max_iter: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions {
            tol: 1e-12,
            cluster_radius: 1e-8,
            max_iter: 200,
        }
    }
}

/// A root with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub value: Complex64,
    pub multiplicity: usize,
}

fn eval_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64, f64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    let mut bound = 0.0;
    let az = z.norm();
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
        bound = bound * az + c.norm();
    }
    (p, dp, bound)
}

/// All `deg p` roots of `p`, each listed once per multiplicity.
pub fn aberth(p: &UPoly<Complex64>, opts: &RootOptions) -> Result<Vec<Complex64>> {
    let n = match p.degree() {
        None | Some(0) => return Err(Error::ConstantPolynomial),
        Some(n) => n,
    };
    let a = p.coeffs();
    // Leading zeros correspond to roots at the origin; peel them off.
    let zeros = a.iter().position(|c| *c != Complex64::new(0.0, 0.0)).unwrap_or(0);
    let a = &a[zeros..];
    let m = n - zeros;
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    if m == 0 {
        return Ok(roots);
    }
    if m == 1 {
        roots.push(-a[0] / a[1]);
        return Ok(roots);
    }

    // Initial guesses on a circle whose radius is the geometric mean of the
    // root moduli, offset from the real axis.
    let radius = (a[0].norm() / a[m].norm()).powf(1.0 / m as f64).max(1e-3);
    let mut z: Vec<Complex64> = (0..m)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / m as f64 + 0.4;
            Complex64::from_polar(radius, theta)
        })
        .collect();

    let eps = f64::EPSILON;
    let mut done = vec![false; m];
    let mut iterations = 0;
    while iterations < opts.max_iter && done.iter().any(|d| !d) {
        iterations += 1;
        for i in 0..m {
            if done[i] {
                continue;
            }
            let (pv, dpv, bound) = eval_with_derivative(a, z[i]);
            if pv.norm() <= 4.0 * eps * m as f64 * bound {
                done[i] = true;
                continue;
            }
            let ratio = pv / dpv;
            let repulsion: Complex64 = (0..m)
                .filter(|&j| j != i)
                .map(|j| 1.0 / (z[i] - z[j]))
                .sum();
            let w = ratio / (1.0 - ratio * repulsion);
            if !w.re.is_finite() || !w.im.is_finite() {
                // perturb and retry next sweep
                let bump = Complex64::new(1e-3, 1e-3) * (1.0 + z[i].norm());
                z[i] += bump;
                continue;
            }
            z[i] -= w;
            if w.norm() <= eps * z[i].norm() {
                done[i] = true;
            }
        }
    }
    let all_ok = z.iter().all(|&zi| {
        let (pv, _, bound) = eval_with_derivative(a, zi);
        pv.norm() <= opts.tol * bound.max(f64::MIN_POSITIVE)
    });
    roots.extend(z);
    if !all_ok {
        return Err(Error::NoConvergence {
            iterations,
            best: roots,
        });
    }
    Ok(roots)
}

/// Roots of `p` with multiplicities. Nearby approximations are merged when
/// the Taylor coefficients of `p` at their centroid confirm a multiple root
/// (up to roundoff), or unconditionally once they are within
/// `opts.cluster_radius`.
pub fn univariate_roots(p: &UPoly<Complex64>, opts: &RootOptions) -> Result<Vec<Root>> {
    let raw = aberth(p, opts)?;
    Ok(cluster_roots(p.coeffs(), &raw, opts.cluster_radius))
}

/// Roots of a rational polynomial. The square-free decomposition is exact, so
/// multiplicities are exact as well; each square-free factor is solved
/// numerically.
pub fn exact_roots(p: &UPoly<Rational>, opts: &RootOptions) -> Result<Vec<Root>> {
    let mut out = Vec::new();
    for (k, factor) in p.square_free() {
        let fc = factor.map(|c| c.to_complex());
        for z in aberth(&fc, opts)? {
            out.push(Root {
                value: refine_exact(&factor, polish(fc.coeffs(), z)),
                multiplicity: k,
            });
        }
    }
    Ok(out)
}

/// `p(z)` for the integer polynomial `p`, evaluated exactly at the dyadic
/// point `z` (any finite float is one) and rounded once.
fn eval_exact(ints: &[BigInt], z: Complex64) -> Option<Complex64> {
    let (ma, ea) = dyadic(z.re)?;
    let (mb, eb) = dyadic(z.im)?;
    // z = (a + i b) / 2^e with a common exponent e
    let e = ea.max(eb);
    let a = ma << (e - ea) as usize;
    let b = mb << (e - eb) as usize;
    let (mut re, mut im) = (ints.last()?.clone(), BigInt::zero());
    for (j, c) in ints.iter().rev().skip(1).enumerate() {
        let nre = &re * &a - &im * &b;
        im = &re * &b + &im * &a;
        re = nre + (c << (e as usize * (j + 1)));
    }
    let den = BigInt::one() << (e as usize * (ints.len() - 1));
    let f = |x: BigInt| Rational::new(x, den.clone()).to_complex().re;
    Some(Complex64::new(f(re), f(im)))
}

/// `x = m / 2^e` with `e >= 0`.
fn dyadic(x: f64) -> Option<(BigInt, u32)> {
    let r = Rational::from_float(x)?;
    let e = r.denom().bits().saturating_sub(1) as u32;
    Some((r.numer().clone(), e))
}

/// Newton steps with `p(z)` evaluated exactly; converting the rational
/// coefficients to floats first loses the digits that separate clustered
/// roots.
fn refine_exact(p: &UPoly<Rational>, mut z: Complex64) -> Complex64 {
    let den = p.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.coeffs().iter().map(|c| (c * Rational::from_integer(den.clone())).to_integer()).collect();
    let scale = Rational::from_integer(den);
    let dp = p.derivative().map(|c| (c * &scale).to_complex());
    for _ in 0..3 {
        let (Some(v), (d, _, _)) = (eval_exact(&ints, z), eval_with_derivative(dp.coeffs(), z)) else {
            break;
        };
        if d.norm() == 0.0 || v.norm() == 0.0 {
            break;
        }
        let step = v / d;
        if !step.re.is_finite() || !step.im.is_finite() {
            break;
        }
        z -= step;
        if step.norm() <= 2.0 * f64::EPSILON * z.norm() {
            break;
        }
    }
    z
}

/// A few Newton steps on a simple root.
fn polish(coeffs: &[Complex64], mut z: Complex64) -> Complex64 {
    for _ in 0..3 {
        let (pv, dpv, _) = eval_with_derivative(coeffs, z);
        if dpv.norm() == 0.0 {
            break;
        }
        let step = pv / dpv;
        if !step.re.is_finite() || !step.im.is_finite() {
            break;
        }
        z -= step;
        if step.norm() <= f64::EPSILON * z.norm() {
            break;
        }
    }
    z
}

fn cluster_roots(coeffs: &[Complex64], raw: &[Complex64], radius: f64) -> Vec<Root> {
    let mut out = Vec::new();
    let all: Vec<usize> = (0..raw.len()).collect();
    for group in link(raw, &all, 1e-2) {
        split(coeffs, raw, &group, 1e-2, radius, &mut out);
    }
    out
}

fn split(
    coeffs: &[Complex64],
    raw: &[Complex64],
    group: &[usize],
    linked_at: f64,
    radius: f64,
    out: &mut Vec<Root>,
) {
    let m = group.len();
    let mut centroid: Complex64 = group.iter().map(|&i| raw[i]).sum::<Complex64>() / m as f64;
    if m > 1 {
        centroid = refine_center(coeffs, centroid, m);
    }
    if m == 1 || linked_at <= radius || confirms_multiple_root(coeffs, centroid, m, radius) {
        out.push(Root {
            value: if m == 1 { raw[group[0]] } else { centroid },
            multiplicity: m,
        });
        return;
    }
    let finer = linked_at / 10.0;
    for sub in link(raw, group, finer) {
        split(coeffs, raw, &sub, finer, radius, out);
    }
}

/// An `m`-fold root of `p` is a simple root of `p^(m-1)`; Newton on that
/// derivative sharpens a cluster centroid.
fn refine_center(coeffs: &[Complex64], c: Complex64, m: usize) -> Complex64 {
    let mut d = coeffs.to_vec();
    for _ in 0..m - 1 {
        d = d.iter().enumerate().skip(1).map(|(k, v)| v * k as f64).collect();
    }
    if d.len() < 2 {
        return c;
    }
    let spread = 1e-2 * c.norm().max(1.0);
    let z = polish(&d, c);
    if (z - c).norm() <= spread {
        z
    } else {
        c
    }
}

/// Single-linkage components of `members` at relative distance `r`.
fn link(raw: &[Complex64], members: &[usize], r: f64) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..members.len()).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut i = i;
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for a in 0..members.len() {
        for b in a + 1..members.len() {
            let (za, zb) = (raw[members[a]], raw[members[b]]);
            if (za - zb).norm() <= r * za.norm().max(zb.norm()).max(1.0) {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_index: Vec<Option<usize>> = vec![None; members.len()];
    for i in 0..members.len() {
        let r = find(&mut parent, i);
        match root_index[r] {
            Some(g) => groups[g].push(members[i]),
            None => {
                root_index[r] = Some(groups.len());
                groups.push(vec![members[i]]);
            }
        }
    }
    groups
}

/// Taylor test for an `m`-fold root at `c`: every coefficient `t_k` of
/// `p(c + h)` with `k < m` must be explained by roots within `radius` of `c`
/// or by roundoff in evaluating it.
fn confirms_multiple_root(coeffs: &[Complex64], c: Complex64, m: usize, radius: f64) -> bool {
    let n = coeffs.len() - 1;
    let taylor = taylor_shift(coeffs, c);
    let delta = radius * c.norm().max(1.0);
    let tm = taylor[m].norm();
    let ac = c.norm();
    let slack = 64.0 * n as f64 * f64::EPSILON;
    (0..m).all(|k| {
        let roundoff: f64 = (k..=n)
            .map(|i| coeffs[i].norm() * binomial(i as u64, k as u64) as f64 * ac.powi((i - k) as i32))
            .sum::<f64>()
            * slack;
        let cluster = binomial(m as u64, k as u64) as f64 * delta.powi((m - k) as i32) * tm;
        taylor[k].norm() <= cluster + roundoff
    })
}

/// Coefficients of `p(c + h)` in `h`.
fn taylor_shift(coeffs: &[Complex64], c: Complex64) -> Vec<Complex64> {
    let mut t = coeffs.to_vec();
    let n = t.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let v = t[j + 1] * c;
            t[j] += v;
        }
    }
    t
}
