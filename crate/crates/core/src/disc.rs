//! Discriminant geometry of binary forms: root factorizations, multiplicity
//! of the discriminant hypersurface, tangent cones, and intersection orders
//! of lines with the discriminant.

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{roots::aberth, MPoly, Monomial, RootOptions, UPoly};
use crate::resultant::resultant_pencil;
use crate::scalar::{Rational, Scalar};
use crate::tensor::SymForm;

/// A root `(x_0 : x_1)` of a binary form.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryRoot {
    pub point: [Complex64; 2],
    /// Exact coordinates when the root is rational.
    pub exact: Option<[Rational; 2]>,
    pub multiplicity: usize,
}

/// `f = prod l_j^{e_j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct RootFactorization {
    pub roots: Vec<BinaryRoot>,
    /// All roots rational.
    pub exact: bool,
}

impl RootFactorization {
    pub fn multiplicities(&self) -> Vec<usize> {
        self.roots.iter().map(|r| r.multiplicity).collect()
    }
}

fn require_binary(f: &SymForm) -> Result<()> {
    if f.n() != 1 {
        return Err(Error::Unsupported {
            n: f.n(),
            d: f.d(),
            reason: "binary forms only".into(),
        });
    }
    if f.form().is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(())
}

/// `f(z, 1)`: the coefficient of `x_0^k x_1^{d-k}` becomes that of `z^k`.
pub fn dehomogenize<C: Scalar>(f: &MPoly<C>, d: usize) -> UPoly<C> {
    UPoly::new(
        (0..=d as u32)
            .map(|k| f.coeff(&Monomial::new(vec![k, d as u32 - k])))
            .collect(),
    )
}

/// Multiplicity of `(1 : 0)` as a root.
fn root_at_infinity(u: &UPoly<Rational>, d: usize) -> usize {
    d - u.degree().unwrap_or(0)
}

pub fn factor_binary(f: &SymForm) -> Result<RootFactorization> {
    require_binary(f)?;
    let d = f.d();
    let u = dehomogenize(f.form(), d);
    let mut roots = Vec::new();
    let mut exact = true;
    for (k, s) in u.square_free() {
        let mut rest = s.clone();
        for r in s.rational_roots() {
            rest = rest.exact_div(&UPoly::new(vec![-r.clone(), Rational::one()]));
            roots.push(BinaryRoot {
                point: [r.to_complex(), Complex64::new(1.0, 0.0)],
                exact: Some([r, Rational::one()]),
                multiplicity: k,
            });
        }
        if rest.degree().unwrap_or(0) > 0 {
            exact = false;
            let pc = rest.map(Scalar::to_complex);
            for z in aberth(&pc, &RootOptions::default())? {
                roots.push(BinaryRoot {
                    point: [z, Complex64::new(1.0, 0.0)],
                    exact: None,
                    multiplicity: k,
                });
            }
        }
    }
    let e_inf = root_at_infinity(&u, d);
    if e_inf > 0 {
        roots.push(BinaryRoot {
            point: [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            exact: Some([Rational::one(), Rational::zero()]),
            multiplicity: e_inf,
        });
    }
    Ok(RootFactorization { roots, exact })
}

/// `sum_j (e_j - 1)`, from the exact square-free decomposition.
pub fn mult_disc_binary(f: &SymForm) -> Result<usize> {
    require_binary(f)?;
    let u = dehomogenize(f.form(), f.d());
    let finite: usize = u
        .square_free()
        .iter()
        .map(|(k, s)| (k - 1) * s.degree().unwrap_or(0))
        .sum();
    Ok(finite + root_at_infinity(&u, f.d()).saturating_sub(1))
}

/// Whether `g` vanishes at a repeated root of `f`, i.e. lies in the tangent
/// cone of the discriminant at `f` (as a set).
pub fn tangent_cone_contains(f: &SymForm, g: &SymForm) -> Result<bool> {
    require_binary(f)?;
    let d = f.d();
    let u = dehomogenize(f.form(), d);
    let repeated = u
        .square_free()
        .into_iter()
        .filter(|(k, _)| *k >= 2)
        .fold(UPoly::constant(Rational::one()), |acc, (_, s)| &acc * &s);
    let e_inf = root_at_infinity(&u, d);
    if repeated.degree() == Some(0) && e_inf < 2 {
        return Err(Error::NotSingular);
    }
    let ug = dehomogenize(g.form(), g.d());
    if ug.is_zero() {
        return Ok(true);
    }
    if repeated.gcd(&ug).degree().unwrap_or(0) > 0 {
        return Ok(true);
    }
    Ok(e_inf >= 2 && ug.coeff(d).is_zero())
}

/// Intersection order at `t = 0` of the line `f + t g` with the
/// discriminant, or `Contained` when the whole line is discriminantal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LineOrder {
    Finite(usize),
    Contained,
}

impl LineOrder {
    pub fn finite(self) -> Option<usize> {
        match self {
            LineOrder::Finite(k) => Some(k),
            LineOrder::Contained => None,
        }
    }
}

/// `disc(f + t g)` as an exact polynomial in `t`.
pub fn disc_on_line(f: &SymForm, g: &SymForm) -> Result<UPoly<Rational>> {
    if f.n() != g.n() || f.d() != g.d() {
        return Err(Error::Shape("forms of different shapes".into()));
    }
    match (f.n(), f.d()) {
        (1, _) | (2, 3) => resultant_pencil(&f.to_ps(), &g.to_ps()),
        (n, d) => Err(Error::Unsupported {
            n,
            d,
            reason: "discriminants are implemented for binary forms and plane cubics".into(),
        }),
    }
}

/// Order of vanishing of `disc(f + t g)` at `t = 0`. Works for binary forms
/// and plane cubics.
pub fn line_order(f: &SymForm, g: &SymForm) -> Result<LineOrder> {
    if proportional(f.form(), g.form()) {
        return Err(Error::Proportional);
    }
    let p = disc_on_line(f, g)?;
    Ok(match p.vanishing_order() {
        Ok(k) => LineOrder::Finite(k),
        Err(_) => LineOrder::Contained,
    })
}

fn proportional(a: &MPoly<Rational>, b: &MPoly<Rational>) -> bool {
    let Some((m, c)) = a.leading_term() else { return true };
    let ratio = b.coeff(m) / c;
    (b - &a.scale(&ratio)).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;
    use crate::random;
    use crate::resultant::discriminant;
    use crate::scalar::q;

    fn bin(text: &str, d: usize) -> SymForm {
        SymForm::new(1, d, parse_poly(text, 2).unwrap()).unwrap()
    }

    #[test]
    fn factorization_examples() {
        let f = factor_binary(&bin("x0^2*x1", 3)).unwrap();
        assert!(f.exact);
        assert_eq!(f.roots.len(), 2);
        assert_eq!(f.roots[0].exact, Some([q(0), q(1)]));
        assert_eq!(f.roots[0].multiplicity, 2);
        assert_eq!(f.roots[1].exact, Some([q(1), q(0)]));
        assert_eq!(f.roots[1].multiplicity, 1);
        let g = factor_binary(&bin("x0^3", 3)).unwrap();
        assert_eq!(g.roots.len(), 1);
        assert_eq!(g.roots[0].exact, Some([q(0), q(1)]));
        assert_eq!(g.roots[0].multiplicity, 3);
        let h = factor_binary(&bin("x0^2 + x1^2", 2)).unwrap();
        assert!(!h.exact);
        assert_eq!(h.multiplicities(), vec![1, 1]);
        assert!(factor_binary(&SymForm::new(1, 3, MPoly::zero(2)).unwrap()).is_err());
    }

    #[test]
    fn multiplicity_examples() {
        assert_eq!(mult_disc_binary(&bin("x0^2*x1", 3)).unwrap(), 1);
        assert_eq!(mult_disc_binary(&bin("x0^3", 3)).unwrap(), 2);
        assert_eq!(mult_disc_binary(&bin("x0^3*x1^2", 5)).unwrap(), 3);
        assert_eq!(mult_disc_binary(&bin("x1^3*x0^2", 5)).unwrap(), 3);
        assert_eq!(mult_disc_binary(&bin("x0*x1*x0 + x0*x1*x1", 3)).unwrap(), 0);
    }

    #[test]
    fn tangent_cone_examples() {
        let f = bin("x0^3", 3);
        // a3 = 0
        assert!(tangent_cone_contains(&f, &bin("2*x0^3 + 3*x0^2*x1 - x0*x1^2", 3)).unwrap());
        assert!(!tangent_cone_contains(&f, &bin("x1^3", 3)).unwrap());
        let s = bin("x0*x1*x0 + x0*x1*x1", 3);
        assert_eq!(tangent_cone_contains(&s, &f), Err(Error::NotSingular));
        let dbl = bin("x0^2*x1", 3);
        assert!(tangent_cone_contains(&dbl, &bin("x0*x1^2", 3)).unwrap());
        assert!(!tangent_cone_contains(&dbl, &bin("x1^3 + x0*x1^2", 3)).unwrap());
        // double root at (1:0)
        let inf = bin("x0*x1^2", 3);
        assert!(tangent_cone_contains(&inf, &bin("x0^2*x1", 3)).unwrap());
        assert!(!tangent_cone_contains(&inf, &bin("x0^3", 3)).unwrap());
    }

    #[test]
    fn line_order_examples() {
        let f = bin("x0^3", 3);
        // generic g with a3 = 0 and a2 != 0: order 3
        let g = bin("2*x0^3 - 3*x0^2*x1 + 6*x0*x1^2", 3);
        assert_eq!(line_order(&f, &g).unwrap(), LineOrder::Finite(3));
        // a3 != 0: order 2
        let h = bin("2*x0^3 - 3*x0^2*x1 + 6*x0*x1^2 + x1^3", 3);
        assert_eq!(line_order(&f, &h).unwrap(), LineOrder::Finite(2));
        assert_eq!(line_order(&f, &f), Err(Error::Proportional));
        // a line inside the discriminant
        let k = bin("x0^2*x1", 3);
        assert_eq!(line_order(&f, &k).unwrap(), LineOrder::Contained);
        // smooth point of Disc
        assert_eq!(line_order(&k, &bin("x1^3 + x0^3 - x0*x1^2", 3)).unwrap(), LineOrder::Finite(1));
    }

    #[test]
    fn disc_vanishes_iff_repeated_root() {
        let mut r = random::rng(5);
        for d in 3..=6 {
            for _ in 0..20 {
                let mut lines: Vec<MPoly<Rational>> = (0..d).map(|_| random::linear_form(&mut r, 2)).collect();
                let distinct = lines.iter().fold(MPoly::constant(2, q(1)), |acc, l| &acc * l);
                let f = SymForm::new(1, d, distinct).unwrap();
                assert!(!discriminant(&f).unwrap().is_zero());
                assert!(factor_binary(&f).unwrap().roots.iter().all(|x| x.multiplicity == 1));
                lines[0] = lines[1].clone();
                let rep = lines.iter().fold(MPoly::constant(2, q(1)), |acc, l| &acc * l);
                let g = SymForm::new(1, d, rep).unwrap();
                assert!(discriminant(&g).unwrap().is_zero());
                assert!(factor_binary(&g).unwrap().roots.iter().any(|x| x.multiplicity >= 2));
            }
        }
    }

    #[test]
    fn constructed_products_are_recovered() {
        let mut r = random::rng(8);
        for _ in 0..20 {
            let ls: Vec<MPoly<Rational>> = (0..4).map(|_| random::linear_form(&mut r, 2)).collect();
            let f = ls.iter().fold(MPoly::constant(2, q(1)), |acc, l| &acc * l);
            let fact = factor_binary(&SymForm::new(1, 4, f).unwrap()).unwrap();
            for l in &ls {
                // root of a x0 + b x1 is (-b : a)
                let a = l.coeff(&Monomial::new(vec![1, 0])).to_complex();
                let b = l.coeff(&Monomial::new(vec![0, 1])).to_complex();
                let hit = fact.roots.iter().any(|rt| (rt.point[0] * a + rt.point[1] * b).norm() < 1e-9 * (1.0 + rt.point[0].norm()));
                assert!(hit);
            }
        }
    }
}
