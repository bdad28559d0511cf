//! Torus and permutation actions on tensors, and orbits of symmetric
//! tensors under the finite isotropy group of the Fermat form.
//!
//! A permutation `s` sends the basis vector `e_j` to `e_{s(j)}`. On forms
//! this is the substitution `x_j -> x_{s(j)}`, and on components the slot
//! `i` moves to `s(i)`, so an eigenvector `w` of `T` becomes the eigenvector
//! `s w` (with `(s w)_{s(j)} = w_j`) of `s T`.

use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::poly::{monomials_of_degree, MPoly};
use crate::resultant::char_poly;
use crate::scalar::{Rational, Scalar};
use crate::tensor::{PSTensor, SymForm};

/// Orders of roots of unity for which exact orbits are available.
pub const SUPPORTED_ORDERS: [usize; 10] = [2, 3, 4, 5, 6, 7, 8, 9, 10, 12];

/// `a . T`: component `f_i` becomes `a_i^{d-1} f_i(x_0 / a_0, ..., x_n / a_n)`.
pub fn torus_act<C: Scalar>(a: &[C], t: &PSTensor<C>) -> Result<PSTensor<C>> {
    if a.len() != t.nvars() {
        return Err(Error::PointLength {
            expected: t.nvars(),
            got: a.len(),
        });
    }
    if let Some(i) = a.iter().position(Zero::is_zero) {
        return Err(Error::ZeroTorusEntry(i));
    }
    let inv: Vec<C> = a.iter().map(|x| C::one() / x.clone()).collect();
    let comps = t
        .components()
        .iter()
        .zip(a)
        .map(|(f, ai)| f.scale_vars(&inv).scale(&crate::poly::mpoly::pow_scalar(ai, t.d() as u32 - 1)))
        .collect();
    PSTensor::new(t.n(), t.d(), comps)
}

fn check_perm(perm: &[usize], m: usize) -> Result<()> {
    let mut seen = vec![false; m];
    if perm.len() != m {
        return Err(Error::Shape(format!("permutation of length {} on {} letters", perm.len(), m)));
    }
    for &p in perm {
        if p >= m || seen[p] {
            return Err(Error::Shape("not a permutation".into()));
        }
        seen[p] = true;
    }
    Ok(())
}

/// `s . T`: the component in slot `s(i)` is `f_i` with `x_j -> x_{s(j)}`.
pub fn perm_act<C: Scalar>(perm: &[usize], t: &PSTensor<C>) -> Result<PSTensor<C>> {
    check_perm(perm, t.nvars())?;
    let mut comps = vec![MPoly::zero(t.nvars()); t.nvars()];
    for (i, f) in t.components().iter().enumerate() {
        comps[perm[i]] = f.permute_vars(perm);
    }
    PSTensor::new(t.n(), t.d(), comps)
}

/// An element of the torus-permutation group; acts by the torus first.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement<C = Rational> {
    pub torus: Vec<C>,
    pub perm: Vec<usize>,
}

impl<C: Scalar> GroupElement<C> {
    pub fn act(&self, t: &PSTensor<C>) -> Result<PSTensor<C>> {
        perm_act(&self.perm, &torus_act(&self.torus, t)?)
    }

    /// Image of an eigenvector.
    pub fn transport(&self, w: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::zero(); w.len()];
        for (j, (wj, aj)) in w.iter().zip(&self.torus).enumerate() {
            out[self.perm[j]] = wj * aj.to_complex();
        }
        out
    }
}

/// An element of `(Z_d)^{n+1} x| S_{n+1}`: coordinate `j` is scaled by
/// `zeta_d^{exps[j]}`, then variables are permuted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SymGroupElement {
    pub exps: Vec<usize>,
    pub perm: Vec<usize>,
}

impl SymGroupElement {
    /// The form `f(a^{-1} x)` with variables then permuted; the symmetric
    /// counterpart of [`GroupElement::act`].
    pub fn act<const N: usize>(&self, f: &MPoly<Cyclotomic<N>>) -> MPoly<Cyclotomic<N>> {
        let inv: Vec<Cyclotomic<N>> = self.exps.iter().map(|&e| Cyclotomic::<N>::zeta_pow(-(e as i64))).collect();
        f.scale_vars(&inv).permute_vars(&self.perm)
    }
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(m - 1) {
        for pos in 0..m {
            let mut q = p.clone();
            q.insert(pos, m - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

fn exponent_vectors(m: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..d).map(move |e| {
                    let mut w = v.clone();
                    w.push(e);
                    w
                })
            })
            .collect();
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitMember {
    pub element: SymGroupElement,
    /// Coefficients in graded-lex order, each written in the power basis of
    /// `zeta_d` (`"a+b*z+..."`).
    pub coeffs: Vec<String>,
    #[serde(skip)]
    pub numeric: Vec<Complex64>,
    /// The member has rational coefficients.
    pub rational: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymOrbit {
    pub n: usize,
    pub d: usize,
    pub members: Vec<OrbitMember>,
    /// `d^n (n+1)!`.
    pub group_bound: usize,
    /// Every member has exactly the characteristic polynomial of the input.
    pub char_polys_equal: bool,
}

fn factorial(m: usize) -> usize {
    (1..=m).product()
}

fn cyclo_text<const N: usize>(c: &Cyclotomic<N>) -> String {
    let mut parts = Vec::new();
    for (k, v) in c.coeffs().iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        let v = crate::scalar::format_rational(v);
        parts.push(match k {
            0 => v,
            1 => format!("{v}*z"),
            _ => format!("{v}*z^{k}"),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

fn orbit_in<const N: usize>(f: &SymForm) -> Result<SymOrbit> {
    let (n, d) = (f.n(), f.d());
    let lifted: SymForm<Cyclotomic<N>> = f.map_coeffs(Cyclotomic::<N>::from_rational);
    let unit = PSTensor::<Cyclotomic<N>>::unit(n, d);
    let reference = char_poly(&lifted.to_ps(), &unit)?;
    let monos = monomials_of_degree(n + 1, d as u32);
    let mut seen: Vec<MPoly<Cyclotomic<N>>> = Vec::new();
    let mut members = Vec::new();
    let mut equal = true;
    for perm in permutations(n + 1) {
        for exps in exponent_vectors(n + 1, d) {
            // the diagonal subgroup acts trivially; fixing exps[0] = 0 skips it
            if exps[0] != 0 {
                continue;
            }
            let element = SymGroupElement { exps, perm: perm.clone() };
            let image = element.act(lifted.form());
            if seen.contains(&image) {
                continue;
            }
            let form = SymForm::new(n, d, image.clone())?;
            equal &= char_poly(&form.to_ps(), &unit)? == reference;
            let coeffs: Vec<Cyclotomic<N>> = monos.iter().map(|m| image.coeff(m)).collect();
            members.push(OrbitMember {
                element,
                coeffs: coeffs.iter().map(cyclo_text).collect(),
                numeric: coeffs.iter().map(Scalar::to_complex).collect(),
                rational: coeffs.iter().all(|c| c.as_rational().is_some()),
            });
            seen.push(image);
        }
    }
    Ok(SymOrbit {
        n,
        d,
        members,
        group_bound: d.pow(n as u32) * factorial(n + 1),
        char_polys_equal: equal,
    })
}

/// Distinct images of `f` under `(Z_d)^{n+1} x| S_{n+1}`, computed exactly
/// in `Q(zeta_d)`.
pub fn sym_orbit(f: &SymForm) -> Result<SymOrbit> {
    if f.n() > 2 {
        return Err(Error::Unsupported {
            n: f.n(),
            d: f.d(),
            reason: "orbits are enumerated for n <= 2".into(),
        });
    }
    match f.d() {
        2 => orbit_in::<2>(f),
        3 => orbit_in::<3>(f),
        4 => orbit_in::<4>(f),
        5 => orbit_in::<5>(f),
        6 => orbit_in::<6>(f),
        7 => orbit_in::<7>(f),
        8 => orbit_in::<8>(f),
        9 => orbit_in::<9>(f),
        10 => orbit_in::<10>(f),
        12 => orbit_in::<12>(f),
        d => Err(Error::Unsupported {
            n: f.n(),
            d,
            reason: "roots of unity of this order are not available".into(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;
    use crate::random;
    use crate::scalar::{q, qf};
    use crate::spectra::{eigenscheme, eigen_residual, EigenOptions};
    use proptest::prelude::*;

    #[test]
    fn identity_elements_act_trivially() {
        let mut r = random::rng(1);
        let t = random::ps_tensor(&mut r, 2, 3);
        assert_eq!(torus_act(&[q(1), q(1), q(1)], &t).unwrap(), t);
        assert_eq!(perm_act(&[0, 1, 2], &t).unwrap(), t);
        let u = PSTensor::<Rational>::unit(2, 4);
        assert_eq!(perm_act(&[1, 0, 2], &u).unwrap(), u);
        assert!(matches!(torus_act(&[q(1), q(0), q(1)], &t), Err(Error::ZeroTorusEntry(1))));
    }

    #[test]
    fn torus_weight_of_basis_element() {
        let t = PSTensor::new(1, 3, vec![parse_poly("x1^2", 2).unwrap(), MPoly::zero(2)]).unwrap();
        let a = [q(2), q(3)];
        let s = torus_act(&a, &t).unwrap();
        assert_eq!(s.component(0), &parse_poly("x1^2", 2).unwrap().scale(&qf(4, 9)));
    }

    #[test]
    fn char_poly_is_invariant() {
        let mut r = random::rng(2);
        for (n, d) in [(1, 3), (1, 4), (2, 3)] {
            let u = PSTensor::unit(n, d);
            let t = random::ps_tensor(&mut r, n, d);
            let reference = char_poly(&t, &u).unwrap();
            for _ in 0..5 {
                let g = GroupElement {
                    torus: (0..=n).map(|_| random::nonzero_rational(&mut r)).collect(),
                    perm: random::permutation(&mut r, n + 1),
                };
                assert_eq!(char_poly(&g.act(&t).unwrap(), &u).unwrap(), reference);
            }
        }
    }

    #[test]
    fn all_permutations_preserve_char_poly() {
        let mut r = random::rng(4);
        for n in [1, 2] {
            let u = PSTensor::unit(n, 3);
            let t = random::ps_tensor(&mut r, n, 3);
            let reference = char_poly(&t, &u).unwrap();
            for p in permutations(n + 1) {
                assert_eq!(char_poly(&perm_act(&p, &t).unwrap(), &u).unwrap(), reference);
            }
        }
    }

    #[test]
    fn eigenvectors_are_transported() {
        let mut r = random::rng(5);
        let u = PSTensor::unit(1, 4);
        let t = random::ps_tensor(&mut r, 1, 4);
        let g = GroupElement {
            torus: vec![q(3), qf(-1, 2)],
            perm: vec![1, 0],
        };
        let gt = g.act(&t).unwrap();
        for p in eigenscheme(&t, &u, &EigenOptions::default()).unwrap().pairs {
            let v = crate::zeros::normalize(&g.transport(&p.w.coords));
            assert!(eigen_residual(&gt, &u, p.lambda.value(), &v) < 1e-8);
        }
    }

    #[test]
    fn fermat_orbit_is_a_point() {
        let o = sym_orbit(&SymForm::fermat(1, 5)).unwrap();
        assert_eq!(o.members.len(), 1);
        let o = sym_orbit(&SymForm::fermat(2, 3)).unwrap();
        assert_eq!(o.members.len(), 1);
    }

    #[test]
    fn generic_orbit_sizes() {
        let mut r = random::rng(6);
        for (d, size) in [(3, 6), (4, 8), (5, 10), (6, 12)] {
            let o = sym_orbit(&random::sym_form(&mut r, 1, d)).unwrap();
            assert_eq!(o.members.len(), size);
            assert!(o.char_polys_equal);
            assert_eq!(o.group_bound % o.members.len(), 0);
        }
    }

    #[test]
    fn ternary_orbit() {
        let mut r = random::rng(7);
        let o = sym_orbit(&random::sym_form(&mut r, 2, 3)).unwrap();
        assert_eq!(o.members.len(), 54);
        assert!(o.char_polys_equal);
    }

    #[test]
    fn special_forms_have_smaller_orbits() {
        let f = SymForm::new(1, 4, parse_poly("x0^4+x1^4+x0^2*x1^2", 2).unwrap()).unwrap();
        let o = sym_orbit(&f).unwrap();
        assert!(o.members.len() < 8);
        assert_eq!(8 % o.members.len(), 0);
        assert!(o.char_polys_equal);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn actions_compose(seed in any::<u64>()) {
            let mut r = random::rng(seed);
            let t = random::ps_tensor(&mut r, 2, 3);
            let a: Vec<Rational> = (0..3).map(|_| random::nonzero_rational(&mut r)).collect();
            let b: Vec<Rational> = (0..3).map(|_| random::nonzero_rational(&mut r)).collect();
            let ab: Vec<Rational> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
            prop_assert_eq!(torus_act(&a, &torus_act(&b, &t).unwrap()).unwrap(), torus_act(&ab, &t).unwrap());
            let s = random::permutation(&mut r, 3);
            let p = random::permutation(&mut r, 3);
            let sp: Vec<usize> = (0..3).map(|j| s[p[j]]).collect();
            prop_assert_eq!(perm_act(&s, &perm_act(&p, &t).unwrap()).unwrap(), perm_act(&sp, &t).unwrap());
        }
    }
}
