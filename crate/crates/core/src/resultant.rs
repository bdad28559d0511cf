//! Resultants of `n+1` forms in `n+1` variables (binary forms of any degree
//! and ternary quadrics), discriminants, and characteristic polynomials.
//!
//! Sign conventions: both constructions give `res(u) = 1` for the unit
//! tensor.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::{default_nodes, monomials_of_degree, univariate_interpolate, MPoly, Monomial, UPoly};
use crate::scalar::{Rational, Scalar};
use crate::tensor::{eigencount, PSTensor, SymForm};

/// Random coordinate changes tried before the Macaulay construction gives up.
pub const MACAULAY_RETRIES: usize = 10;

fn require_binary<C: Scalar>(t: &PSTensor<C>) -> Result<()> {
    if t.n() != 1 {
        return Err(Error::Unsupported {
            n: t.n(),
            d: t.d(),
            reason: "Sylvester matrices need n = 1".into(),
        });
    }
    Ok(())
}

/// Matrix of `(g_0, g_1) -> g_0 f_0 + g_1 f_1` from `S^{d-2} W* (x) V*` to
/// `S^{2d-3} W*`. Columns: the monomials of degree `d-2` times `f_0`, then
/// times `f_1`; rows: monomials of degree `2d-3`; both in descending
/// graded-lex order.
pub fn sylvester_matrix<C: Scalar>(t: &PSTensor<C>) -> Result<Matrix<C>> {
    require_binary(t)?;
    let d = t.d() as u32;
    let rows = monomials_of_degree(2, 2 * d - 3);
    let size = rows.len();
    let mut m = Matrix::zeros(size, size);
    let mut col = 0;
    for f in t.components() {
        for g in monomials_of_degree(2, d - 2) {
            for (mono, c) in f.terms() {
                let r = row_index(&rows, &g.mul(mono));
                m[(r, col)] = c.clone();
            }
            col += 1;
        }
    }
    Ok(m)
}

fn row_index(rows: &[Monomial], m: &Monomial) -> usize {
    // rows are sorted descending
    rows.binary_search_by(|probe| m.cmp(probe)).expect("monomial of the right degree")
}

pub fn resultant_binary<C: Scalar>(t: &PSTensor<C>) -> Result<C> {
    Ok(sylvester_matrix(t)?.det())
}

/// Macaulay matrix of three ternary quadrics in degree 4 together with the
/// indices of its extraneous minor. Row and column `m` both belong to the
/// degree-4 monomial `m`; the row holds `(m / x_i^2) f_i` for the first `i`
/// with `x_i^2 | m`.
pub fn macaulay_matrix<C: Scalar>(f: &[MPoly<C>]) -> Result<(Matrix<C>, Vec<usize>)> {
    if f.len() != 3 || f.iter().any(|q| q.nvars() != 3 || !q.is_homogeneous_of(2)) {
        return Err(Error::Shape("need three homogeneous quadrics in three variables".into()));
    }
    let mons = monomials_of_degree(3, 4);
    let size = mons.len();
    let mut m = Matrix::zeros(size, size);
    let mut minor = Vec::new();
    for (r, mono) in mons.iter().enumerate() {
        let reduced: Vec<usize> = (0..3).filter(|&i| mono.exps()[i] >= 2).collect();
        if reduced.len() >= 2 {
            minor.push(r);
        }
        let i = reduced[0];
        let mut sq = vec![0; 3];
        sq[i] = 2;
        let shift = mono.div(&Monomial::new(sq)).expect("divisible");
        for (fm, c) in f[i].terms() {
            m[(r, row_index(&mons, &shift.mul(fm)))] = c.clone();
        }
    }
    Ok((m, minor))
}

fn macaulay_quotient<C: Scalar>(f: &[MPoly<C>]) -> Result<Option<C>> {
    let (m, minor) = macaulay_matrix(f)?;
    let den = m.select(&minor, &minor).det();
    let negligible = if C::EXACT {
        den.is_zero()
    } else {
        let scale = f.iter().map(MPoly::max_coeff).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        den.modulus() <= 1e-12 * scale.powi(3)
    };
    if negligible {
        return Ok(None);
    }
    Ok(Some(m.det() / den))
}

/// Resultant of three ternary quadrics (degree 12 in their coefficients).
/// A vanishing extraneous minor is avoided by a random change of coordinates
/// `A`, using `res(f o A) = det(A)^8 res(f)`.
pub fn resultant_ternary_quadrics<C: Scalar>(f: &[MPoly<C>]) -> Result<C> {
    // The extraneous minor is f0[x0^2] * (f0[x0^2] f1[x1^2] - f0[x1^2] f1[x0^2]),
    // which no coordinate change can rescue when f0 = 0 or f1 is a multiple
    // of f0. Then two of the conics coincide and the system has a zero.
    if f.len() == 3 && (f[0].is_zero() || proportional(&f[0], &f[1])) {
        return Ok(C::zero());
    }
    if let Some(r) = macaulay_quotient(f)? {
        return Ok(r);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    for _ in 0..MACAULAY_RETRIES {
        let a: Vec<Vec<C>> = (0..3)
            .map(|_| (0..3).map(|_| C::from_int(rng.random_range(-4..=4))).collect())
            .collect();
        let det = Matrix::from_rows(a.clone()).det();
        if det.is_zero() {
            continue;
        }
        let g = f
            .iter()
            .map(|q| q.linear_substitution(&a))
            .collect::<Result<Vec<_>>>()?;
        if let Some(r) = macaulay_quotient(&g)? {
            let mut scale = C::one();
            for _ in 0..8 {
                scale = scale * det.clone();
            }
            return Ok(r / scale);
        }
    }
    Err(Error::Degenerate(format!(
        "Macaulay minor vanished after {MACAULAY_RETRIES} coordinate changes"
    )))
}

fn proportional<C: Scalar>(a: &MPoly<C>, b: &MPoly<C>) -> bool {
    let Some((m, c)) = a.leading_term() else { return true };
    let ratio = b.coeff(m) / c.clone();
    (b - &a.scale(&ratio)).is_zero()
}

/// `res(T)` for the supported shapes `n = 1` and `(n, d) = (2, 3)`.
pub fn resultant<C: Scalar>(t: &PSTensor<C>) -> Result<C> {
    match (t.n(), t.d()) {
        (1, _) => resultant_binary(t),
        (2, 3) => resultant_ternary_quadrics(t.components()),
        (n, d) => Err(Error::Unsupported {
            n,
            d,
            reason: "resultants are implemented for n = 1 and (2, 3)".into(),
        }),
    }
}

/// `disc(f) = res(grad f / d)`; zero exactly when `{f = 0}` is singular.
pub fn discriminant<C: Scalar>(f: &SymForm<C>) -> Result<C> {
    match (f.n(), f.d()) {
        (1, d) if d >= 2 => resultant(&f.to_ps()),
        (2, 3) => resultant(&f.to_ps()),
        (n, d) => Err(Error::Unsupported {
            n,
            d,
            reason: "discriminants are implemented for binary forms and plane cubics".into(),
        }),
    }
}

/// `s -> res(T + s S)` as an exact polynomial of degree at most `D(n,d)`,
/// interpolated from the nodes `0, 1, -1, 2, ...`.
pub fn resultant_pencil<C: Scalar>(t: &PSTensor<C>, s: &PSTensor<C>) -> Result<UPoly<C>> {
    let nodes: Vec<C> = default_nodes(eigencount(t.n(), t.d()) + 1)
        .iter()
        .map(C::from_rational)
        .collect();
    resultant_pencil_at(t, s, &nodes)
}

pub fn resultant_pencil_at<C: Scalar>(t: &PSTensor<C>, s: &PSTensor<C>, nodes: &[C]) -> Result<UPoly<C>> {
    t.check_shape(s)?;
    let big_d = eigencount(t.n(), t.d());
    let samples = nodes
        .iter()
        .map(|x| Ok((x.clone(), resultant(&t.add_scaled(s, x)?)?)))
        .collect::<Result<Vec<_>>>()?;
    univariate_interpolate(&samples, big_d)
}

/// Monic characteristic polynomial `lambda^D + c_1 lambda^{D-1} + ... + c_D`.
#[derive(Debug, Clone, PartialEq)]
pub struct CharPoly<C = Rational> {
    coeffs: Vec<C>,
}

impl<C: Scalar> CharPoly<C> {
    /// From `c_1, ..., c_D`.
    pub fn new(coeffs: Vec<C>) -> Self {
        CharPoly { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// `c_1, ..., c_D`.
    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// As a univariate polynomial in `lambda`.
    pub fn to_upoly(&self) -> UPoly<C> {
        let mut v: Vec<C> = self.coeffs.iter().rev().cloned().collect();
        v.push(C::one());
        UPoly::new(v)
    }

    pub fn eval(&self, lambda: &C) -> C {
        self.to_upoly().eval(lambda)
    }

    pub fn map<D: Scalar>(&self, f: impl Fn(&C) -> D) -> CharPoly<D> {
        CharPoly {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    fn from_upoly(p: &UPoly<C>, d: usize) -> Self {
        CharPoly {
            coeffs: (0..d).map(|i| p.coeff(d - 1 - i)).collect(),
        }
    }
}

/// `phi(lambda) = res(T - lambda t) / ((-1)^D res(t))`.
pub fn char_poly<C: Scalar>(t_big: &PSTensor<C>, t: &PSTensor<C>) -> Result<CharPoly<C>> {
    let nodes: Vec<C> = default_nodes(eigencount(t.n(), t.d()) + 1)
        .iter()
        .map(C::from_rational)
        .collect();
    char_poly_at(t_big, t, &nodes)
}

/// [`char_poly`] with explicit interpolation nodes (at least `D+1`,
/// pairwise distinct).
pub fn char_poly_at<C: Scalar>(t_big: &PSTensor<C>, t: &PSTensor<C>, nodes: &[C]) -> Result<CharPoly<C>> {
    t_big.check_shape(t)?;
    let res_t = resultant(t)?;
    if res_t.is_zero() {
        return Err(Error::SingularReference);
    }
    let big_d = eigencount(t.n(), t.d());
    let p = resultant_pencil_at(t_big, &t.scale(&-C::one()), nodes)?;
    let lead = if big_d.is_multiple_of(2) { res_t } else { -res_t };
    let monic = p.scale(&(C::one() / lead));
    Ok(CharPoly::from_upoly(&monic, big_d))
}

/// Characteristic polynomial of binary tensors as `det(lambda I - A)` with
/// `A = M_t^{-1} M_T`, `M` the Sylvester matrix. Shares no code with the
/// resultant interpolation route beyond the Sylvester matrix itself.
pub fn char_poly_binary_matrix<C: Scalar>(t_big: &PSTensor<C>, t: &PSTensor<C>) -> Result<CharPoly<C>> {
    t_big.check_shape(t)?;
    let mt = sylvester_matrix(t)?;
    let a = mt.solve(&sylvester_matrix(t_big)?).ok_or(Error::SingularReference)?;
    Ok(CharPoly::new(a.char_poly_coeffs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qf};
    use num_traits::Zero;
    use proptest::prelude::*;

    fn binary(d: usize, f0: &[i64], f1: &[i64]) -> PSTensor {
        let c = |v: &[i64]| MPoly::from_dense(2, d as u32 - 1, &v.iter().map(|&x| q(x)).collect::<Vec<_>>()).unwrap();
        PSTensor::new(1, d, vec![c(f0), c(f1)]).unwrap()
    }

    fn quadric(c: &[i64]) -> MPoly<Rational> {
        MPoly::from_dense(3, 2, &c.iter().map(|&x| q(x)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn unit_sylvester_is_identity() {
        for d in 2..7 {
            let u: PSTensor = PSTensor::unit(1, d);
            let m = sylvester_matrix(&u).unwrap();
            assert_eq!(m.rows(), 2 * d - 2);
            assert_eq!(m, Matrix::identity(2 * d - 2));
            assert_eq!(resultant(&u).unwrap(), q(1));
        }
    }

    #[test]
    fn common_root_kills_binary_resultant() {
        // x0 x1 and x0 (x0 + x1)
        let t = binary(3, &[0, 1, 0], &[1, 1, 0]);
        assert!(resultant_binary(&t).unwrap().is_zero());
        assert_eq!(sylvester_matrix(&t).unwrap().rank(), 3);
    }

    #[test]
    fn binary_resultant_against_classical_formula() {
        // res(a x0^2 + b x0 x1 + c x1^2, p x0^2 + q x0 x1 + r x1^2)
        //   = (a r - c p)^2 - (a q - b p)(b r - c q)
        let (a, b, c, p, qq, r) = (3, -2, 5, 1, 4, -7);
        let t = binary(3, &[a, b, c], &[p, qq, r]);
        let expected = (a * r - c * p).pow(2) - (a * qq - b * p) * (b * r - c * qq);
        assert_eq!(resultant_binary(&t).unwrap(), q(expected));
    }

    #[test]
    fn unit_quadrics_have_resultant_one() {
        let u: PSTensor = PSTensor::unit(2, 3);
        assert_eq!(resultant(&u).unwrap(), q(1));
    }

    #[test]
    fn common_zero_kills_ternary_resultant() {
        // all vanish at (1:1:1)
        let f = vec![
            quadric(&[1, 0, 0, -1, 0, 0]),
            quadric(&[0, 1, -1, 0, 0, 0]),
            quadric(&[0, 0, 0, 1, 0, -1]),
        ];
        assert!(resultant_ternary_quadrics(&f).unwrap().is_zero());
    }

    #[test]
    fn degenerate_minor_falls_back_to_substitution() {
        // x0 x1, x1 x2, x0 x2 + x1^2 + x2^2 + x0^2 : leading squares of f0, f1 vanish
        let f = vec![
            quadric(&[0, 1, 0, 0, 0, 0]),
            quadric(&[0, 0, 0, 0, 1, 0]),
            quadric(&[1, 0, 1, 1, 0, 1]),
        ];
        let (m, minor) = macaulay_matrix(&f).unwrap();
        assert!(m.select(&minor, &minor).det().is_zero());
        // on x1 = 0 the third form is x0^2 + x0 x2 + x2^2, which has zeros
        assert!(resultant_ternary_quadrics(&f).unwrap().is_zero());
        // same leading-square pattern, no common zero: x0 x1, x1 x2, x0^2 + x1^2 + x2^2 + x0 x2 shifted
        let h = vec![
            quadric(&[0, 1, 0, 0, 0, 0]),
            quadric(&[0, 0, 1, 0, 0, 0]),
            quadric(&[0, 0, 0, 0, 1, 0]),
        ];
        // x0 x1, x0 x2, x1 x2 share (1:0:0)
        assert!(resultant_ternary_quadrics(&h).unwrap().is_zero());
        let g = vec![quadric(&[2, 0, 0, 0, 0, 0]), quadric(&[0, 0, 0, 3, 0, 0]), quadric(&[0, 0, 0, 0, 0, 5])];
        assert_eq!(resultant_ternary_quadrics(&g).unwrap(), q(30 * 30 * 30 * 30));
    }

    #[test]
    fn ternary_resultant_scales_like_det_power() {
        let f = vec![
            quadric(&[1, 2, 0, -1, 3, 1]),
            quadric(&[2, 0, 1, 1, -1, 4]),
            quadric(&[-3, 1, 1, 0, 2, 1]),
        ];
        let r = resultant_ternary_quadrics(&f).unwrap();
        assert!(!r.is_zero());
        let a = vec![vec![q(1), q(2), q(0)], vec![q(0), q(1), q(-1)], vec![q(3), q(0), q(1)]];
        let det = Matrix::from_rows(a.clone()).det();
        let g: Vec<_> = f.iter().map(|p| p.linear_substitution(&a).unwrap()).collect();
        let rg = resultant_ternary_quadrics(&g).unwrap();
        let mut d8 = q(1);
        for _ in 0..8 {
            d8 *= &det;
        }
        assert_eq!(rg, r * d8);
    }

    #[test]
    fn ternary_agrees_with_binary_on_line_pairs() {
        // res(f0, f1, x2^2) = res(f0|_{x2=0}, f1|_{x2=0})^2
        let cases = [
            ([1, 2, 3], [4, -1, 2]),
            ([2, 0, -1], [1, 1, 1]),
            ([1, -3, 2], [0, 1, 5]),
            ([1, 0, 0], [0, 0, 1]),
            ([5, 1, -2], [3, 3, 7]),
            ([1, -2, 1], [1, -1, 0]),
            ([2, 2, 2], [1, 0, -4]),
            ([-1, 4, 1], [2, 1, 3]),
            ([3, 1, 0], [0, 1, 3]),
            ([1, 1, -6], [1, -5, 6]),
        ];
        for (a, b) in cases {
            let lift = |c: [i64; 3], extra: [i64; 3]| quadric(&[c[0], c[1], extra[0], c[2], extra[1], extra[2]]);
            let f = vec![lift(a, [1, -1, 2]), lift(b, [0, 3, 1]), quadric(&[0, 0, 0, 0, 0, 1])];
            let bin = binary(3, &a, &b);
            let rb = resultant_binary(&bin).unwrap();
            let rt = resultant_ternary_quadrics(&f).unwrap();
            assert_eq!(rt, &rb * &rb, "case {a:?} {b:?}");
        }
    }

    #[test]
    fn discriminant_examples() {
        let f = SymForm::from_dense(1, 3, &[q(0), q(1), q(1), q(0)]).unwrap(); // x0 x1 (x0 + x1)
        assert!(!discriminant(&f).unwrap().is_zero());
        let g = SymForm::from_dense(1, 3, &[q(0), q(1), q(0), q(0)]).unwrap(); // x0^2 x1
        assert!(discriminant(&g).unwrap().is_zero());
        let nodal = crate::poly::parse_poly("x0*x1^2 - x2^3 + x0*x2^2", 3).unwrap();
        assert!(discriminant(&SymForm::new(2, 3, nodal).unwrap()).unwrap().is_zero());
        let fermat = SymForm::<Rational>::fermat(2, 3);
        assert!(!discriminant(&fermat).unwrap().is_zero());
        assert!(matches!(discriminant(&SymForm::<Rational>::fermat(2, 4)), Err(Error::Unsupported { .. })));
    }

    #[test]
    fn char_poly_of_reference_is_power() {
        let t = binary(4, &[1, 2, 0, 3], &[0, 1, -1, 5]);
        let u = PSTensor::unit(1, 4);
        let phi = char_poly(&t, &t).unwrap();
        let expect = UPoly::from_roots(&vec![q(1); 6]);
        assert_eq!(phi.to_upoly(), expect);
        assert!(char_poly(&t, &binary(4, &[1, 0, 0, 0], &[1, 0, 0, 0])).is_err());
        assert_eq!(char_poly(&u, &u).unwrap().to_upoly(), expect);
    }

    #[test]
    fn diagonal_binary_cubic() {
        let (c0, c1) = (qf(3, 2), q(-5));
        let f = SymForm::from_dense(1, 3, &[c0.clone(), q(0), q(0), c1.clone()]).unwrap();
        let phi = char_poly(&f.to_ps(), &PSTensor::unit(1, 3)).unwrap();
        assert_eq!(phi.to_upoly(), UPoly::from_roots(&[c0.clone(), c0, c1.clone(), c1]));
    }

    #[test]
    fn ternary_char_poly_of_diagonal() {
        let f = SymForm::from_dense(2, 3, &[q(2), q(0), q(0), q(0), q(0), q(0), q(-1), q(0), q(0), q(3)]).unwrap();
        let phi = char_poly(&f.to_ps(), &PSTensor::unit(2, 3)).unwrap();
        assert_eq!(phi.degree(), 12);
        let roots: Vec<Rational> = [2, -1, 3].iter().flat_map(|&c| vec![q(c); 4]).collect();
        assert_eq!(phi.to_upoly(), UPoly::from_roots(&roots));
    }

    fn rat() -> impl Strategy<Value = Rational> {
        (-30i64..30, 1i64..9).prop_map(|(a, b)| qf(a, b))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn binary_resultant_homogeneity(c in proptest::collection::vec(rat(), 8), mu in rat()) {
            let t = PSTensor::from_flat(1, 4, &c).unwrap();
            let r = resultant(&t).unwrap();
            let rs = resultant(&t.scale(&mu)).unwrap();
            let mut p = q(1);
            for _ in 0..6 { p *= &mu; }
            prop_assert_eq!(rs, r * p);
        }

        #[test]
        fn char_poly_coefficient_weights(c in proptest::collection::vec(rat(), 6), mu in rat()) {
            let t = PSTensor::from_flat(1, 3, &c).unwrap();
            let u = PSTensor::unit(1, 3);
            let a = char_poly(&t, &u).unwrap();
            let b = char_poly(&t.scale(&mu), &u).unwrap();
            let mut p = q(1);
            for i in 0..4 {
                p *= &mu;
                prop_assert_eq!(b.coeffs()[i].clone(), &a.coeffs()[i] * &p);
            }
        }

        #[test]
        fn node_sets_are_interchangeable(c in proptest::collection::vec(rat(), 8), r in proptest::collection::vec(rat(), 8)) {
            let t = PSTensor::from_flat(1, 4, &c).unwrap();
            let mut tt = PSTensor::from_flat(1, 4, &r).unwrap();
            if resultant(&tt).unwrap().is_zero() {
                tt = PSTensor::unit(1, 4);
            }
            let nodes: Vec<Rational> = (0..7).map(|k| qf(2 * k + 3, 7)).collect();
            prop_assert_eq!(char_poly(&t, &tt).unwrap(), char_poly_at(&t, &tt, &nodes).unwrap());
            prop_assert_eq!(char_poly(&t, &tt).unwrap(), char_poly_binary_matrix(&t, &tt).unwrap());
        }

        #[test]
        fn binary_resultant_vanishes_iff_common_factor(a in proptest::collection::vec(-5i64..5, 2), b in proptest::collection::vec(-5i64..5, 4), share in proptest::bool::ANY) {
            // f0 = l * g0, f1 = m * g1 with m = l when `share`
            prop_assume!(a.iter().any(|&x| x != 0));
            let l = MPoly::from_dense(2, 1, &[q(a[0]), q(a[1])]).unwrap();
            let other = MPoly::from_dense(2, 1, &[q(a[1] + 1), q(-a[0] + 2)]).unwrap();
            let g0 = MPoly::from_dense(2, 1, &[q(b[0]), q(b[1])]).unwrap();
            let g1 = MPoly::from_dense(2, 1, &[q(b[2]), q(b[3])]).unwrap();
            prop_assume!(!g0.is_zero() && !g1.is_zero());
            let m = if share { l.clone() } else { other };
            let t = PSTensor::new(1, 3, vec![&l * &g0, &m * &g1]).unwrap();
            let zero = resultant(&t).unwrap().is_zero();
            // gcd test on dehomogenized forms, with the root at infinity
            // handled by the degree drop of both
            let to_u = |p: &MPoly<Rational>| UPoly::new(vec![p.coeff(&Monomial::new(vec![0, 2])), p.coeff(&Monomial::new(vec![1, 1])), p.coeff(&Monomial::new(vec![2, 0]))]);
            let (u0, u1) = (to_u(t.component(0)), to_u(t.component(1)));
            let at_infinity = u0.coeff(2).is_zero() && u1.coeff(2).is_zero();
            let common = at_infinity || u0.gcd(&u1).degree().unwrap_or(0) > 0 || (u0.is_zero() || u1.is_zero());
            prop_assert_eq!(zero, common);
        }
    }
}
