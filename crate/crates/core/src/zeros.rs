//! Common projective zeros of binary forms and of ternary quadrics.
//!
//! Rational input is handled exactly wherever the zeros are rational (gcds
//! over `Q`); irrational zeros are computed numerically and polished by
//! Gauss-Newton on the full system.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::Rng;

use crate::disc::dehomogenize;
use crate::error::{Error, Result};
use crate::poly::{exact_roots, univariate_roots, MPoly, Monomial, RootOptions, UPoly};
use crate::random::{self, Rng64};
use crate::scalar::{Rational, Scalar};

/// Relative residual accepted before polishing.
pub const FILTER_TOL: f64 = 1e-6;
/// Projective distance below which two points are identified.
pub const DEDUP_TOL: f64 = 1e-6;
const FRAME_SEED: u64 = 0x5eed_0004;
const FRAMES: usize = 8;

/// A projective point, normalized to unit norm with its first nonzero
/// coordinate real and positive.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjPoint {
    pub coords: Vec<Complex64>,
    /// Exact coordinates, scaled so that the first nonzero one is `1`.
    pub exact: Option<Vec<Rational>>,
}

impl ProjPoint {
    pub fn from_exact(v: Vec<Rational>) -> Self {
        let pivot = v.iter().find(|c| !c.is_zero()).cloned().unwrap_or_else(Rational::one);
        let v: Vec<Rational> = v.iter().map(|c| c / &pivot).collect();
        ProjPoint {
            coords: normalize(&v.iter().map(Scalar::to_complex).collect::<Vec<_>>()),
            exact: Some(v),
        }
    }

    pub fn from_complex(v: &[Complex64]) -> Self {
        ProjPoint {
            coords: normalize(v),
            exact: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ZeroSet {
    Points(Vec<ProjPoint>),
    /// The common zero locus has positive dimension.
    Curve,
}

pub fn normalize(v: &[Complex64]) -> Vec<Complex64> {
    let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return v.to_vec();
    }
    let big = v.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let lead = v.iter().find(|c| c.norm() > 1e-10 * big).copied().unwrap_or(Complex64::one());
    let phase = lead / lead.norm();
    v.iter().map(|c| c / (phase * norm)).collect()
}

/// `sqrt(1 - |<v, w>|^2)` for unit vectors.
pub fn projective_distance(v: &[Complex64], w: &[Complex64]) -> f64 {
    // norm of the part of w orthogonal to v; stabler than 1 - |<v, w>|^2
    let ip: Complex64 = v.iter().zip(w).map(|(a, b)| a.conj() * b).sum();
    v.iter().zip(w).map(|(a, b)| (b - ip * a).norm_sqr()).sum::<f64>().sqrt()
}

/// Keeps the first occurrence of every point, preferring exact ones.
pub fn dedup_points(points: Vec<ProjPoint>) -> Vec<ProjPoint> {
    let mut out: Vec<ProjPoint> = Vec::new();
    for p in points {
        match out.iter_mut().find(|q| projective_distance(&q.coords, &p.coords) < DEDUP_TOL) {
            Some(q) => {
                if q.exact.is_none() && p.exact.is_some() {
                    *q = p;
                }
            }
            None => out.push(p),
        }
    }
    out
}

/// `|f(x)| / sum |coefficients|` at the normalized point.
pub fn relative_residual(f: &MPoly<Complex64>, x: &[Complex64]) -> f64 {
    let scale: f64 = f.terms().map(|(_, c)| c.norm()).sum();
    if scale == 0.0 {
        return 0.0;
    }
    f.eval(x).map(|v| v.norm() / scale).unwrap_or(f64::INFINITY)
}

fn max_residual(fs: &[MPoly<Complex64>], x: &[Complex64]) -> f64 {
    fs.iter().map(|f| relative_residual(f, x)).fold(0.0, f64::max)
}

/// Gauss-Newton on `f_i(x) = 0` with the affine normalization `<x0, x> = 1`.
pub fn polish_projective(fs: &[MPoly<Complex64>], x: &[Complex64]) -> Vec<Complex64> {
    let mut x = normalize(x);
    let m = x.len();
    let grads: Vec<Vec<MPoly<Complex64>>> = fs.iter().map(MPoly::gradient).collect();
    let anchor: Vec<Complex64> = x.iter().map(|c| c.conj()).collect();
    let mut res = max_residual(fs, &x);
    for _ in 0..8 {
        if res < 1e-15 {
            break;
        }
        let rows = fs.len() + 1;
        let mut j = DMatrix::<Complex64>::zeros(rows, m);
        let mut rhs = DVector::<Complex64>::zeros(rows);
        for (i, f) in fs.iter().enumerate() {
            rhs[i] = -f.eval(&x).expect("length checked");
            for k in 0..m {
                j[(i, k)] = grads[i][k].eval(&x).expect("length checked");
            }
        }
        let ax: Complex64 = anchor.iter().zip(&x).map(|(a, b)| a * b).sum();
        rhs[fs.len()] = Complex64::one() - ax;
        for k in 0..m {
            j[(fs.len(), k)] = anchor[k];
        }
        let Ok(dx) = j.svd(true, true).solve(&rhs, 1e-13) else { break };
        let cand: Vec<Complex64> = x.iter().zip(dx.iter()).map(|(a, b)| a + b).collect();
        if cand.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            break;
        }
        let cand = normalize(&cand);
        let r = max_residual(fs, &cand);
        if r >= res {
            break;
        }
        x = cand;
        res = r;
    }
    x
}

fn as_rational_polys<C: Scalar>(fs: &[MPoly<C>]) -> Option<Vec<MPoly<Rational>>> {
    if !C::EXACT {
        return None;
    }
    fs.iter()
        .map(|f| {
            let terms: Option<Vec<(Monomial, Rational)>> =
                f.terms().map(|(m, c)| c.to_rational().map(|q| (m.clone(), q))).collect();
            terms.map(|t| MPoly::from_terms(f.nvars(), t))
        })
        .collect()
}

/// Distinct roots of a rational polynomial; rational ones exactly.
fn distinct_roots(u: &UPoly<Rational>) -> Result<Vec<(Complex64, Option<Rational>)>> {
    let mut out = Vec::new();
    if u.degree().unwrap_or(0) == 0 {
        return Ok(out);
    }
    let sqfree = u
        .square_free()
        .into_iter()
        .fold(UPoly::constant(Rational::one()), |acc, (_, s)| &acc * &s);
    let mut rest = sqfree.clone();
    for r in sqfree.rational_roots() {
        rest = rest.exact_div(&UPoly::new(vec![-r.clone(), Rational::one()]));
        out.push((r.to_complex(), Some(r)));
    }
    if rest.degree().unwrap_or(0) > 0 {
        for root in exact_roots(&rest, &RootOptions::default())? {
            out.push((root.value, None));
        }
    }
    Ok(out)
}

/// Common zeros of binary forms (all of the same degree).
pub fn common_zeros_binary<C: Scalar>(fs: &[MPoly<C>]) -> Result<ZeroSet> {
    match as_rational_polys(fs) {
        Some(q) => binary_exact(&q),
        None => binary_numeric(&fs.iter().map(|f| f.map_coeffs(Scalar::to_complex)).collect::<Vec<_>>()),
    }
}

fn binary_exact(fs: &[MPoly<Rational>]) -> Result<ZeroSet> {
    let nz: Vec<&MPoly<Rational>> = fs.iter().filter(|f| !f.is_zero()).collect();
    let Some(k) = nz.first().and_then(|f| f.homogeneous_degree()) else {
        return Ok(ZeroSet::Curve);
    };
    let k = k as usize;
    let us: Vec<UPoly<Rational>> = nz.iter().map(|f| dehomogenize(f, k)).collect();
    let g = us[1..].iter().fold(us[0].clone(), |a, b| a.gcd(b));
    let mut pts = Vec::new();
    for (z, r) in distinct_roots(&g)? {
        pts.push(match r {
            Some(r) => ProjPoint::from_exact(vec![r, Rational::one()]),
            None => ProjPoint::from_complex(&[z, Complex64::one()]),
        });
    }
    if us.iter().all(|u| u.coeff(k).is_zero()) {
        pts.push(ProjPoint::from_exact(vec![Rational::one(), Rational::zero()]));
    }
    Ok(ZeroSet::Points(pts))
}

fn random_frame(rng: &mut Rng64, m: usize) -> Vec<Vec<Rational>> {
    random::invertible_matrix(rng, m)
}

fn apply_frame(a: &[Vec<Rational>], y: &[Complex64]) -> Vec<Complex64> {
    a.iter()
        .map(|row| row.iter().zip(y).map(|(c, v)| c.to_complex() * v).sum())
        .collect()
}

fn apply_frame_exact(a: &[Vec<Rational>], y: &[Rational]) -> Vec<Rational> {
    a.iter()
        .map(|row| row.iter().zip(y).fold(Rational::zero(), |s, (c, v)| s + c * v))
        .collect()
}

fn to_complex_matrix(a: &[Vec<Rational>]) -> Vec<Vec<Complex64>> {
    a.iter().map(|r| r.iter().map(Scalar::to_complex).collect()).collect()
}

fn binary_numeric(fs: &[MPoly<Complex64>]) -> Result<ZeroSet> {
    let scale = fs.iter().map(MPoly::max_coeff).fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(ZeroSet::Curve);
    }
    let k = fs
        .iter()
        .find(|f| !f.is_zero())
        .and_then(|f| f.total_degree())
        .unwrap_or(0) as usize;
    let pivot = fs
        .iter()
        .max_by(|a, b| a.max_coeff().total_cmp(&b.max_coeff()))
        .expect("nonempty");
    let mut rng = random::rng(FRAME_SEED);
    for _ in 0..FRAMES {
        let a = random_frame(&mut rng, 2);
        let g = pivot.linear_substitution(&to_complex_matrix(&a))?;
        let u = dehomogenize(&g, k);
        if u.coeff(k).norm() <= 1e-10 * g.max_coeff() {
            continue;
        }
        if k == 0 {
            return Ok(ZeroSet::Points(Vec::new()));
        }
        let mut pts = Vec::new();
        for root in univariate_roots(&u, &RootOptions::default())? {
            let x = apply_frame(&a, &[root.value, Complex64::one()]);
            let x = normalize(&x);
            if max_residual(fs, &x) < FILTER_TOL {
                pts.push(ProjPoint::from_complex(&polish_projective(fs, &x)));
            }
        }
        return Ok(ZeroSet::Points(dedup_points(pts)));
    }
    Err(Error::Inconclusive("no usable coordinate frame for binary zeros".into()))
}

/// Common zeros of ternary quadrics.
///
/// Two random combinations of the quadrics are written in a random frame
/// `x = A y` as `a y2^2 + b y2 + c`; their resultant in `y2` is a binary
/// quartic whose roots carry all common zeros. The zero set is a curve when
/// the quartic vanishes identically in two frames.
pub fn common_zeros_ternary_quadrics<C: Scalar>(fs: &[MPoly<C>]) -> Result<ZeroSet> {
    for f in fs {
        if f.nvars() != 3 || !(f.is_zero() || f.is_homogeneous_of(2)) {
            return Err(Error::Shape("expected ternary quadrics".into()));
        }
    }
    match as_rational_polys(fs) {
        Some(q) => ternary(&q, true),
        None => ternary(&fs.iter().map(|f| f.map_coeffs(|c| Scalar::to_complex(c))).collect::<Vec<_>>(), false),
    }
}

/// `[a, b, c]` with `r = a y2^2 + b y2 + c`, as forms in `(y0, y1)`.
fn split_last<C: Scalar>(r: &MPoly<C>) -> [MPoly<C>; 3] {
    let mut parts = [MPoly::zero(2), MPoly::zero(2), MPoly::zero(2)];
    for (m, c) in r.terms() {
        let e = m.exps();
        parts[e[2] as usize].add_term(Monomial::new(vec![e[0], e[1]]), c.clone());
    }
    let [c, b, a] = parts;
    [a, b, c]
}

/// Resultant in `y2` of two ternary quadrics.
pub fn eliminate_last<C: Scalar>(r0: &MPoly<C>, r1: &MPoly<C>) -> MPoly<C> {
    let [a, b, c] = split_last(r0);
    let [a1, b1, c1] = split_last(r1);
    let ac = &(&a * &c1) - &(&a1 * &c);
    let ab = &(&a * &b1) - &(&a1 * &b);
    let bc = &(&b * &c1) - &(&b1 * &c);
    &(&ac * &ac) - &(&ab * &bc)
}

/// `f(y0, y1, s)` as a polynomial in `s`.
fn restrict_to_fiber<C: Scalar>(f: &MPoly<C>, y0: &C, y1: &C) -> Result<UPoly<C>> {
    // x0 -> y0 u, x1 -> y1 u, x2 -> s in the variables (s, u)
    let sub = vec![
        vec![C::zero(), y0.clone()],
        vec![C::zero(), y1.clone()],
        vec![C::one(), C::zero()],
    ];
    Ok(dehomogenize(&f.linear_substitution(&sub)?, 2))
}

fn ternary<C: Scalar>(fs: &[MPoly<C>], exact: bool) -> Result<ZeroSet> {
    let nz: Vec<&MPoly<C>> = fs.iter().filter(|f| !f.is_zero()).collect();
    if nz.is_empty() {
        return Ok(ZeroSet::Curve);
    }
    let fc: Vec<MPoly<Complex64>> = nz.iter().map(|f| f.map_coeffs(Scalar::to_complex)).collect();
    let mut rng = random::rng(FRAME_SEED);
    let mut zero_frames = 0;
    for _ in 0..FRAMES {
        let a = random_frame(&mut rng, 3);
        let ac: Vec<Vec<C>> = a.iter().map(|r| r.iter().map(C::from_rational).collect()).collect();
        let qs: Vec<MPoly<C>> = nz.iter().map(|f| f.linear_substitution(&ac)).collect::<Result<_>>()?;
        let combo = |rng: &mut Rng64| -> MPoly<C> {
            qs.iter().fold(MPoly::zero(3), |acc, q| {
                let c = C::from_int(rng.random_range(1..=9) * if rng.random_bool(0.5) { 1 } else { -1 });
                &acc + &q.scale(&c)
            })
        };
        let r0 = combo(&mut rng);
        let r1 = combo(&mut rng);
        let elim = eliminate_last(&r0, &r1);
        let scale = qs.iter().map(MPoly::max_coeff).fold(0.0, f64::max).powi(4);
        let vanishes = if exact { elim.is_zero() } else { elim.max_coeff() <= 1e-12 * scale };
        if vanishes {
            zero_frames += 1;
            if zero_frames >= 2 {
                return Ok(ZeroSet::Curve);
            }
            continue;
        }
        let k = 4usize;
        let u = dehomogenize(&elim, k);
        let mut bases: Vec<(Vec<Complex64>, Option<[Rational; 2]>)> = Vec::new();
        if exact {
            let ur = u.map(|c| c.to_rational().expect("exact"));
            for (z, r) in distinct_roots(&ur)? {
                bases.push((vec![z, Complex64::one()], r.map(|r| [r, Rational::one()])));
            }
            if ur.coeff(k).is_zero() {
                bases.push((vec![Complex64::one(), Complex64::zero()], Some([Rational::one(), Rational::zero()])));
            }
        } else {
            let uc = u.map(Scalar::to_complex);
            let lead_small = uc.coeff(k).norm() <= 1e-10 * elim.max_coeff();
            if lead_small {
                continue;
            }
            for root in univariate_roots(&uc, &RootOptions::default())? {
                bases.push((vec![root.value, Complex64::one()], None));
            }
        }
        let mut pts: Vec<ProjPoint> = Vec::new();
        let mut candidates: Vec<Vec<Complex64>> = Vec::new();
        for (y01, ex) in &bases {
            if let Some([y0, y1]) = ex {
                let polys: Vec<UPoly<Rational>> = qs
                    .iter()
                    .map(|q| restrict_to_fiber(&q.map_coeffs(|c| c.to_rational().expect("exact")), y0, y1))
                    .collect::<Result<_>>()?;
                let nzp: Vec<&UPoly<Rational>> = polys.iter().filter(|p| !p.is_zero()).collect();
                if nzp.is_empty() {
                    return Ok(ZeroSet::Curve);
                }
                let g = nzp[1..].iter().fold(nzp[0].clone(), |acc, p| acc.gcd(p));
                for (z, r) in distinct_roots(&g)? {
                    match r {
                        Some(r) => {
                            let y = [y0.clone(), y1.clone(), r];
                            pts.push(ProjPoint::from_exact(apply_frame_exact(&a, &y)));
                        }
                        None => candidates.push(vec![y01[0], y01[1], z]),
                    }
                }
            } else {
                let (y0, y1) = (y01[0], y01[1]);
                for r in [&r0, &r1] {
                    let p = restrict_to_fiber(&r.map_coeffs(Scalar::to_complex), &y0, &y1)?;
                    let p = trim(&p);
                    if p.degree().unwrap_or(0) == 0 {
                        continue;
                    }
                    for root in univariate_roots(&p, &RootOptions::default())? {
                        candidates.push(vec![y0, y1, root.value]);
                    }
                }
            }
        }
        if qs.iter().all(|q| q.coeff(&Monomial::new(vec![0, 0, 2])).is_zero()) && exact {
            pts.push(ProjPoint::from_exact(apply_frame_exact(&a, &[Rational::zero(), Rational::zero(), Rational::one()])));
        } else if !exact {
            candidates.push(vec![Complex64::zero(), Complex64::zero(), Complex64::one()]);
        }
        for y in candidates {
            let x = normalize(&apply_frame(&a, &y));
            if max_residual(&fc, &x) < FILTER_TOL {
                pts.push(ProjPoint::from_complex(&polish_projective(&fc, &x)));
            }
        }
        return Ok(ZeroSet::Points(dedup_points(pts)));
    }
    Err(Error::Inconclusive("no usable coordinate frame for ternary zeros".into()))
}

/// Drops leading coefficients that are negligible relative to the rest.
fn trim(p: &UPoly<Complex64>) -> UPoly<Complex64> {
    let big = p.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut v = p.coeffs().to_vec();
    while v.len() > 1 && v.last().is_some_and(|c| c.norm() <= 1e-12 * big) {
        v.pop();
    }
    UPoly::new(v)
}
