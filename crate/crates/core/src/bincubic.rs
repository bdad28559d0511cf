//! Symbolic check of the closed forms of `disc(f + t g)` for the two
//! singular binary cubics `f = x0^3` and `f = x0^2 x1`, with
//! `g = a0 x0^3 + 3 a1 x0^2 x1 + 3 a2 x0 x1^2` (the tangent-cone condition
//! `a3 = 0` already imposed).
//!
//! The computation runs in `Q[a0, a1, a2, t]`: the Sylvester matrix of the
//! gradient components has polynomial entries and its determinant is
//! expanded along rows.

use num_traits::Zero;
use serde::Serialize;

use crate::poly::{format_poly_named, monomials_of_degree, MPoly, Monomial};
use crate::scalar::{format_rational, q, qf, Rational};

const NAMES: [&str; 4] = ["a0", "a1", "a2", "t"];
// variables of the working ring Q[x0, x1, a0, a1, a2, t]
const NV: usize = 6;

fn var(i: usize) -> MPoly<Rational> {
    MPoly::var(NV, i)
}

fn cst(c: Rational) -> MPoly<Rational> {
    MPoly::constant(NV, c)
}

/// Coefficient of `x0^i x1^j` in a polynomial of the working ring, as a
/// polynomial in `(a0, a1, a2, t)`.
fn x_coefficient(p: &MPoly<Rational>, i: u32, j: u32) -> MPoly<Rational> {
    MPoly::from_terms(
        4,
        p.terms()
            .filter(|(m, _)| m.exps()[0] == i && m.exps()[1] == j)
            .map(|(m, c)| (Monomial::new(m.exps()[2..].to_vec()), c.clone())),
    )
}

fn det_expand(m: &[Vec<MPoly<Rational>>]) -> MPoly<Rational> {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let nvars = m[0][0].nvars();
    let mut acc = MPoly::zero(nvars);
    for (c, entry) in m[0].iter().enumerate() {
        if entry.is_zero() {
            continue;
        }
        let minor: Vec<Vec<MPoly<Rational>>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(k, _)| *k != c).map(|(_, v)| v.clone()).collect())
            .collect();
        let term = entry * &det_expand(&minor);
        acc = if c % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// `disc(f + t g)` in `Q[a0, a1, a2, t]`, using the same normalization as
/// the numeric discriminant (resultant of the components `(1/3) df/dx_i`).
pub fn symbolic_disc_on_line(f: &MPoly<Rational>) -> MPoly<Rational> {
    let (x0, x1) = (var(0), var(1));
    let g = &(&(&var(2) * &x0.pow(3)) + &(&cst(q(3)) * &(&var(3) * &(&x0.pow(2) * &x1))))
        + &(&cst(q(3)) * &(&var(4) * &(&x0 * &x1.pow(2))));
    let lifted = MPoly::from_terms(
        NV,
        f.terms().map(|(m, c)| {
            let mut e = m.exps().to_vec();
            e.resize(NV, 0);
            (Monomial::new(e), c.clone())
        }),
    );
    let ft = &lifted + &(&var(5) * &g);
    let third = cst(qf(1, 3));
    let comps: Vec<MPoly<Rational>> = (0..2)
        .map(|i| &third * &ft.partial_derivative(i).expect("index in range"))
        .collect();
    let rows = monomials_of_degree(2, 3);
    let mut cols: Vec<Vec<MPoly<Rational>>> = Vec::new();
    for c in &comps {
        for shift in [&x0, &x1] {
            let p = shift * c;
            cols.push(rows.iter().map(|m| x_coefficient(&p, m.exps()[0], m.exps()[1])).collect());
        }
    }
    let matrix: Vec<Vec<MPoly<Rational>>> = (0..4).map(|r| (0..4).map(|c| cols[c][r].clone()).collect()).collect();
    det_expand(&matrix)
}

fn v(i: usize) -> MPoly<Rational> {
    MPoly::var(4, i)
}

fn c4(c: Rational) -> MPoly<Rational> {
    MPoly::constant(4, c)
}

/// `disc(g) = 3 a1^2 a2^2 - 4 a0 a2^3 - 4 a1^3 a3 - a0^2 a3^2 + 6 a0 a1 a2 a3`
/// (the classical discriminant divided by 27) at `a3 = 0`.
pub fn disc_g() -> MPoly<Rational> {
    let (a0, a1, a2) = (v(0), v(1), v(2));
    &(&c4(q(3)) * &(&a1.pow(2) * &a2.pow(2))) - &(&c4(q(4)) * &(&a0 * &a2.pow(3)))
}

/// `t^3 (disc(g) t - 4 a2^3)`.
pub fn expected_triple_line() -> MPoly<Rational> {
    let t = v(3);
    let inner = &(&disc_g() * &t) - &(&c4(q(4)) * &v(2).pow(3));
    &t.pow(3) * &inner
}

/// `t^2 (disc(g) t^2 + 2 a1 a2^2 t - (1/3) a2^2)`.
pub fn expected_double_root() -> MPoly<Rational> {
    let t = v(3);
    let inner = &(&(&disc_g() * &t.pow(2)) + &(&c4(q(2)) * &(&v(1) * &(&v(2).pow(2) * &t))))
        - &(&c4(qf(1, 3)) * &v(2).pow(2));
    &t.pow(2) * &inner
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientMismatch {
    pub monomial: String,
    pub computed: String,
    pub expected: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub f: String,
    pub computed: String,
    pub expected: String,
    /// `computed = scalar * expected`, solved from one coefficient.
    pub scalar: Option<String>,
    pub matched: bool,
    pub mismatches: Vec<CoefficientMismatch>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BincubicReport {
    pub identities: Vec<IdentityCheck>,
    /// With `a2 = 0` the line `x0^3 + t g` lies in the discriminant.
    pub a2_zero_forces_contained: bool,
}

impl BincubicReport {
    pub fn all_matched(&self) -> bool {
        self.identities.iter().all(|c| c.matched) && self.a2_zero_forces_contained
    }
}

fn names() -> Vec<String> {
    NAMES.iter().map(|s| s.to_string()).collect()
}

fn monomial_name(m: &Monomial) -> String {
    let p = MPoly::from_terms(4, [(m.clone(), q(1))]);
    format_poly_named(&p, &names())
}

/// Compares `computed` with `expected` up to one nonzero rational factor.
pub fn compare_up_to_scalar(label: &str, computed: &MPoly<Rational>, expected: &MPoly<Rational>) -> IdentityCheck {
    let scalar = expected
        .leading_term()
        .map(|(m, c)| computed.coeff(m) / c)
        .filter(|s| !s.is_zero());
    let scaled = scalar.as_ref().map_or_else(|| expected.clone(), |s| expected.scale(s));
    let diff = computed - &scaled;
    let mut mismatches = Vec::new();
    for (m, _) in diff.terms() {
        mismatches.push(CoefficientMismatch {
            monomial: monomial_name(m),
            computed: format_rational(&computed.coeff(m)),
            expected: format_rational(&scaled.coeff(m)),
        });
    }
    IdentityCheck {
        f: label.to_string(),
        computed: format_poly_named(computed, &names()),
        expected: format_poly_named(expected, &names()),
        scalar: scalar.as_ref().map(format_rational),
        matched: scalar.is_some() && mismatches.is_empty(),
        mismatches,
    }
}

pub fn bincubic_identities() -> BincubicReport {
    let triple = MPoly::monomial(&[3, 0], q(1));
    let double = MPoly::monomial(&[2, 1], q(1));
    let d_triple = symbolic_disc_on_line(&triple);
    let d_double = symbolic_disc_on_line(&double);
    let identities = vec![
        compare_up_to_scalar("x0^3", &d_triple, &expected_triple_line()),
        compare_up_to_scalar("x0^2*x1", &d_double, &expected_double_root()),
    ];
    let a2_zero = d_triple
        .linear_substitution(&[
            vec![q(1), q(0), q(0), q(0)],
            vec![q(0), q(1), q(0), q(0)],
            vec![q(0), q(0), q(0), q(0)],
            vec![q(0), q(0), q(0), q(1)],
        ])
        .expect("square substitution");
    BincubicReport {
        identities,
        a2_zero_forces_contained: a2_zero.is_zero(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use crate::resultant::discriminant;
    use crate::tensor::SymForm;

    /// Oracle: evaluate the symbolic result at random rational points and
    /// compare with the numeric discriminant of the specialised cubic.
    #[test]
    fn symbolic_matches_pointwise_discriminant() {
        let mut r = random::rng(21);
        for f in [MPoly::monomial(&[3, 0], q(1)), MPoly::monomial(&[2, 1], q(1))] {
            let sym = symbolic_disc_on_line(&f);
            for _ in 0..10 {
                let p: Vec<Rational> = (0..4).map(|_| random::rational(&mut r)).collect();
                let (a0, a1, a2, t) = (&p[0], &p[1], &p[2], &p[3]);
                let coeffs = [
                    f.coeff(&Monomial::new(vec![3, 0])) + t * a0,
                    f.coeff(&Monomial::new(vec![2, 1])) + t * a1 * q(3),
                    f.coeff(&Monomial::new(vec![1, 2])) + t * a2 * q(3),
                    q(0),
                ];
                let form = SymForm::from_dense(1, 3, &coeffs).unwrap();
                assert_eq!(sym.eval(&p).unwrap(), discriminant(&form).unwrap());
            }
        }
    }

    #[test]
    fn triple_line_identity_holds_up_to_scalar() {
        let rep = bincubic_identities();
        let first = &rep.identities[0];
        assert!(first.matched, "{first:?}");
        assert!(rep.a2_zero_forces_contained);
    }

    #[test]
    fn leading_coefficient_is_disc_of_g() {
        // the t^4 coefficient is the discriminant of g in our normalization,
        // which is disc_g up to the same scalar
        let d = symbolic_disc_on_line(&MPoly::monomial(&[2, 1], q(1)));
        let t4: MPoly<Rational> = MPoly::from_terms(4, d.terms().filter(|(m, _)| m.exps()[3] == 4).map(|(m, c)| (m.clone(), c.clone())));
        let g = &disc_g() * &v(3).pow(4);
        assert!(compare_up_to_scalar("t^4", &t4, &g).matched);
    }
}
