//! Eigenvalues and eigenvectors of a tensor `T` relative to a reference
//! tensor `t`.

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::disc::mult_disc_binary;
use crate::error::{Error, Result};
use crate::poly::{exact_roots, MPoly, RootOptions, UPoly};
use crate::resultant::{char_poly, CharPoly};
use crate::scalar::{Rational, Scalar};
use crate::tensor::{eigencount, PSTensor, SymForm};
use crate::zeros::{common_zeros_binary, common_zeros_ternary_quadrics, dedup_points, ProjPoint, ZeroSet};

/// Tolerances of the eigenvector pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenOptions {
    /// Bound on `|T(w) - lambda t(w)|`, relative to `1 + |T|`.
    pub residual_tol: f64,
    /// Relative size of `phi(lambda)` accepted for a numeric eigenvalue.
    pub eigenvalue_tol: f64,
}

impl Default for EigenOptions {
    fn default() -> Self {
        EigenOptions {
            residual_tol: 1e-8,
            eigenvalue_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Lambda {
    Exact(Rational),
    Numeric(Complex64),
}

impl Lambda {
    pub fn value(&self) -> Complex64 {
        match self {
            Lambda::Exact(q) => q.to_complex(),
            Lambda::Numeric(z) => *z,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenvalue {
    pub lambda: Lambda,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub lambda: Lambda,
    pub w: ProjPoint,
    pub algebraic_multiplicity: usize,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Eigenvectors {
    Points(Vec<ProjPoint>),
    /// Every point is an eigenvector (all components of `T - lambda t`
    /// vanish), or the eigenvectors form a curve.
    Infinite,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenschemeReport {
    pub eigenvalues: Vec<Eigenvalue>,
    pub pairs: Vec<EigenPair>,
    pub reduced: bool,
    pub infinite: bool,
}

/// Roots of a characteristic polynomial with exact multiplicities. Rational
/// roots are returned exactly.
pub fn spectrum(cp: &CharPoly<Rational>) -> Result<Vec<Eigenvalue>> {
    let mut out = Vec::new();
    for (k, s) in cp.to_upoly().square_free() {
        let mut rest = s.clone();
        for r in s.rational_roots() {
            rest = rest.exact_div(&UPoly::new(vec![-r.clone(), Rational::one()]));
            out.push(Eigenvalue {
                lambda: Lambda::Exact(r),
                multiplicity: k,
            });
        }
        if rest.degree().unwrap_or(0) > 0 {
            for root in exact_roots(&rest, &RootOptions::default())? {
                out.push(Eigenvalue {
                    lambda: Lambda::Numeric(root.value),
                    multiplicity: k,
                });
            }
        }
    }
    Ok(out)
}

pub fn eigenvalues(t_big: &PSTensor, t: &PSTensor) -> Result<Vec<Eigenvalue>> {
    spectrum(&char_poly(t_big, t)?)
}

fn tensor_norm(t: &PSTensor) -> f64 {
    t.components()
        .iter()
        .flat_map(|f| f.terms().map(|(_, c)| c.to_complex().norm_sqr()))
        .sum::<f64>()
        .sqrt()
}

/// `|T(w) - lambda t(w)|` at the unit vector `w`.
pub fn eigen_residual(t_big: &PSTensor, t: &PSTensor, lambda: Complex64, w: &[Complex64]) -> f64 {
    let tc = t_big.map_coeffs(Scalar::to_complex);
    let rc = t.map_coeffs(Scalar::to_complex);
    let a = tc.contract(w).expect("length matches");
    let b = rc.contract(w).expect("length matches");
    a.iter().zip(&b).map(|(x, y)| (x - lambda * y).norm_sqr()).sum::<f64>().sqrt()
}

/// Eigenvectors for one eigenvalue: the common zeros of the components of
/// `T - lambda t`.
pub fn eigenvectors_for(t_big: &PSTensor, t: &PSTensor, lambda: &Lambda, opts: &EigenOptions) -> Result<Eigenvectors> {
    t_big.check_shape(t)?;
    let zeros = match lambda {
        Lambda::Exact(l) => {
            let cp = char_poly(t_big, t)?;
            let v = cp.eval(l);
            if !v.is_zero() {
                return Err(Error::NotAnEigenvalue {
                    lambda: crate::scalar::format_rational(l),
                    residual: v.to_complex().norm(),
                });
            }
            let comps = t_big.add_scaled(t, &-l.clone())?;
            solve_components(comps.components())?
        }
        Lambda::Numeric(z) => {
            let cp = char_poly(t_big, t)?.map(Scalar::to_complex);
            let scale: f64 = cp.to_upoly().coeffs().iter().enumerate().map(|(k, c)| c.norm() * z.norm().powi(k as i32)).sum();
            let v = cp.eval(z).norm();
            if v > opts.eigenvalue_tol * scale {
                return Err(Error::NotAnEigenvalue {
                    lambda: format!("{z}"),
                    residual: v / scale,
                });
            }
            let tc = t_big.map_coeffs(Scalar::to_complex);
            let rc = t.map_coeffs(Scalar::to_complex);
            let comps = tc.add_scaled(&rc, &-*z)?;
            solve_components(comps.components())?
        }
    };
    Ok(match zeros {
        ZeroSet::Curve => Eigenvectors::Infinite,
        ZeroSet::Points(p) => Eigenvectors::Points(p),
    })
}

fn solve_components<C: Scalar>(comps: &[MPoly<C>]) -> Result<ZeroSet> {
    match comps.len() {
        2 => common_zeros_binary(comps),
        3 if comps.iter().all(|f| f.is_zero() || f.is_homogeneous_of(2)) => common_zeros_ternary_quadrics(comps),
        _ => Err(Error::Unsupported {
            n: comps.len() - 1,
            d: comps.first().and_then(|f| f.total_degree()).unwrap_or(0) as usize + 1,
            reason: "eigenvectors are implemented for n = 1 and (2, 3)".into(),
        }),
    }
}

pub fn eigenscheme(t_big: &PSTensor, t: &PSTensor, opts: &EigenOptions) -> Result<EigenschemeReport> {
    let values = eigenvalues(t_big, t)?;
    let bound = opts.residual_tol * (1.0 + tensor_norm(t_big));
    let mut pairs = Vec::new();
    let mut infinite = false;
    for ev in &values {
        match eigenvectors_for(t_big, t, &ev.lambda, opts)? {
            Eigenvectors::Infinite => infinite = true,
            Eigenvectors::Points(points) => {
                for w in points {
                    let residual = eigen_residual(t_big, t, ev.lambda.value(), &w.coords);
                    if residual > bound {
                        continue;
                    }
                    pairs.push(EigenPair {
                        lambda: ev.lambda.clone(),
                        w,
                        algebraic_multiplicity: ev.multiplicity,
                        residual,
                    });
                }
            }
        }
    }
    let distinct = dedup_points(pairs.iter().map(|p| p.w.clone()).collect()).len();
    let reduced = !infinite && distinct == eigencount(t.n(), t.d());
    Ok(EigenschemeReport {
        eigenvalues: values,
        pairs,
        reduced,
        infinite,
    })
}

/// Algebraic multiplicity of `lambda0` next to the multiplicity of
/// `f - lambda0 * (x0^d + x1^d)` on the discriminant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MultiplicityBound {
    pub algebraic: usize,
    pub hypersurface: usize,
}

impl MultiplicityBound {
    pub fn holds(&self) -> bool {
        self.algebraic >= self.hypersurface
    }
}

pub fn mult_lower_bound_check(f: &SymForm, lambda0: &Rational) -> Result<MultiplicityBound> {
    if f.n() != 1 {
        return Err(Error::Unsupported {
            n: f.n(),
            d: f.d(),
            reason: "the multiplicity comparison needs binary forms".into(),
        });
    }
    let fermat = SymForm::fermat(1, f.d());
    let cp = char_poly(&f.to_ps(), &fermat.to_ps())?;
    let shifted = cp.to_upoly();
    let root = UPoly::new(vec![-lambda0.clone(), Rational::one()]);
    let mut algebraic = 0;
    let mut p = shifted;
    loop {
        let (quot, rem) = p.div_rem(&root);
        if !rem.is_zero() || p.is_zero() {
            break;
        }
        algebraic += 1;
        p = quot;
    }
    let g = f.add_scaled(&fermat, &-lambda0.clone());
    let hypersurface = if g.form().is_zero() { usize::MAX } else { mult_disc_binary(&g)? };
    Ok(MultiplicityBound { algebraic, hypersurface })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;
    use crate::random;
    use crate::scalar::q;
    use crate::tensor::symmetric_to_ps;
    use crate::zeros::projective_distance;

    fn sym(text: &str, n: usize, d: usize) -> SymForm {
        SymForm::new(n, d, parse_poly(text, n + 1).unwrap()).unwrap()
    }

    fn total(vals: &[Eigenvalue]) -> usize {
        vals.iter().map(|e| e.multiplicity).sum()
    }

    #[test]
    fn reference_has_single_eigenvalue() {
        let u = PSTensor::unit(1, 3);
        let v = eigenvalues(&u, &u).unwrap();
        assert_eq!(v, vec![Eigenvalue { lambda: Lambda::Exact(q(1)), multiplicity: 4 }]);
        assert_eq!(eigenvectors_for(&u, &u, &Lambda::Exact(q(1)), &EigenOptions::default()).unwrap(), Eigenvectors::Infinite);
        let rep = eigenscheme(&u, &u, &EigenOptions::default()).unwrap();
        assert!(rep.infinite && !rep.reduced);
    }

    #[test]
    fn diagonal_binary_cubic() {
        let t = sym("2*x0^3+5*x1^3", 1, 3).to_ps();
        let u = PSTensor::unit(1, 3);
        let mut v = eigenvalues(&t, &u).unwrap();
        v.sort_by(|a, b| a.lambda.value().re.total_cmp(&b.lambda.value().re));
        assert_eq!(
            v,
            vec![
                Eigenvalue { lambda: Lambda::Exact(q(2)), multiplicity: 2 },
                Eigenvalue { lambda: Lambda::Exact(q(5)), multiplicity: 2 }
            ]
        );
        let Eigenvectors::Points(p) = eigenvectors_for(&t, &u, &Lambda::Exact(q(2)), &EigenOptions::default()).unwrap() else {
            panic!()
        };
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].exact, Some(vec![q(1), q(0)]));
    }

    #[test]
    fn non_eigenvalue_is_rejected() {
        let t = sym("2*x0^3+5*x1^3", 1, 3).to_ps();
        let u = PSTensor::unit(1, 3);
        let e = eigenvectors_for(&t, &u, &Lambda::Exact(q(3)), &EigenOptions::default());
        assert!(matches!(e, Err(Error::NotAnEigenvalue { .. })));
    }

    #[test]
    fn cuspidal_cubic_at_zero() {
        // x0 x1^2 - x2^3 has eigenvalue 0 relative to the unit tensor, with
        // eigenvector the cusp
        let t = symmetric_to_ps(&sym("x0*x1^2-x2^3", 2, 3));
        let u = PSTensor::unit(2, 3);
        let Eigenvectors::Points(p) = eigenvectors_for(&t, &u, &Lambda::Exact(q(0)), &EigenOptions::default()).unwrap() else {
            panic!()
        };
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].exact, Some(vec![q(1), q(0), q(0)]));
    }

    #[test]
    fn random_binary_quintic_is_reduced() {
        let mut r = random::rng(12);
        let u = PSTensor::unit(1, 5);
        for _ in 0..5 {
            let t = random::sym_form(&mut r, 1, 5).to_ps();
            let rep = eigenscheme(&t, &u, &EigenOptions::default()).unwrap();
            assert_eq!(total(&rep.eigenvalues), 8);
            assert!(rep.reduced, "{rep:?}");
            assert_eq!(rep.pairs.len(), 8);
        }
    }

    #[test]
    fn nearly_double_eigenvalues_keep_their_eigenvectors() {
        // two conjugate pairs of eigenvalues about 0.015 apart
        let coeffs: Vec<Rational> = ["-58/9", "-50/57", "-4/19", "-1/3", "-13/50", "-29/6"]
            .iter()
            .map(|s| crate::scalar::parse_rational(s).unwrap())
            .collect();
        let t = SymForm::from_dense(1, 5, &coeffs).unwrap().to_ps();
        let rep = eigenscheme(&t, &PSTensor::unit(1, 5), &EigenOptions::default()).unwrap();
        assert!(rep.reduced);
        assert_eq!(rep.pairs.len(), 8);
        let values: Vec<Complex64> = rep.eigenvalues.iter().map(|e| e.lambda.value()).collect();
        for z in &values {
            assert!(values.iter().any(|w| (w - z.conj()).norm() < 1e-12 * z.norm()));
        }
    }

    #[test]
    fn random_ternary_cubic_pairs() {
        let mut r = random::rng(13);
        let u = PSTensor::unit(2, 3);
        let t = random::ps_tensor(&mut r, 2, 3);
        let rep = eigenscheme(&t, &u, &EigenOptions::default()).unwrap();
        assert_eq!(total(&rep.eigenvalues), 12);
        assert_eq!(rep.pairs.len(), 12);
        assert!(rep.reduced);
        let bound = 1e-8 * (1.0 + tensor_norm(&t));
        for p in &rep.pairs {
            assert!(p.residual <= bound);
        }
    }

    #[test]
    fn eigenvectors_are_pairwise_distinct_across_eigenvalues() {
        let mut r = random::rng(14);
        let u = PSTensor::unit(1, 4);
        let t = random::sym_form(&mut r, 1, 4).to_ps();
        let rep = eigenscheme(&t, &u, &EigenOptions::default()).unwrap();
        for (i, a) in rep.pairs.iter().enumerate() {
            for b in &rep.pairs[i + 1..] {
                assert!(projective_distance(&a.w.coords, &b.w.coords) > 1e-6);
            }
        }
    }

    #[test]
    fn shared_eigenvector_breaks_reducedness() {
        // res(T - lambda u) is proportional to lambda^2 (1 - lambda)^2 and
        // lambda = 0 has the single eigenvector (1 : 0)
        let t = PSTensor::new(
            1,
            3,
            vec![parse_poly("x0*x1", 2).unwrap(), parse_poly("x1^2", 2).unwrap()],
        )
        .unwrap();
        let u = PSTensor::unit(1, 3);
        let rep = eigenscheme(&t, &u, &EigenOptions::default()).unwrap();
        let zero = rep.eigenvalues.iter().find(|e| e.lambda == Lambda::Exact(q(0))).unwrap();
        assert!(zero.multiplicity >= 2);
        assert!(!rep.reduced);
    }

    #[test]
    fn multiplicity_lower_bound() {
        let f = sym("x0^3", 1, 3);
        let m = mult_lower_bound_check(&f, &q(0)).unwrap();
        assert_eq!(m.hypersurface, 2);
        assert!(m.holds() && m.algebraic >= 2);
        let f = sym("x0^3+2*x0^2*x1", 1, 3);
        let m = mult_lower_bound_check(&f, &q(0)).unwrap();
        assert!(m.holds() && m.hypersurface == 1);
        let mut r = random::rng(3);
        let g = random::sym_form(&mut r, 1, 4);
        for ev in eigenvalues(&g.to_ps(), &PSTensor::unit(1, 4)).unwrap() {
            if let Lambda::Exact(l) = ev.lambda {
                assert!(mult_lower_bound_check(&g, &l).unwrap().holds());
            }
        }
    }
}
