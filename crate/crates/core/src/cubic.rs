//! The eight orbits of singular plane cubics: representatives,
//! multiplicities on the discriminant, tangent cones and classification.

use num_traits::Zero;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::{parse_poly, MPoly, Monomial};
use crate::random;
use crate::resultant::discriminant;
use crate::scalar::{q, Rational};
use crate::tensor::SymForm;
use crate::zeros::{common_zeros_ternary_quadrics, ZeroSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CubicOrbit {
    #[serde(rename = "nodal")]
    Nodal,
    #[serde(rename = "cuspidal")]
    Cuspidal,
    #[serde(rename = "conic+secant")]
    ConicSecant,
    #[serde(rename = "conic+tangent")]
    ConicTangent,
    #[serde(rename = "triangle")]
    Triangle,
    #[serde(rename = "asterisk")]
    Asterisk,
    #[serde(rename = "line+double-line")]
    LineDoubleLine,
    #[serde(rename = "triple-line")]
    TripleLine,
}

impl CubicOrbit {
    pub const ALL: [CubicOrbit; 8] = [
        CubicOrbit::Nodal,
        CubicOrbit::Cuspidal,
        CubicOrbit::ConicSecant,
        CubicOrbit::ConicTangent,
        CubicOrbit::Triangle,
        CubicOrbit::Asterisk,
        CubicOrbit::LineDoubleLine,
        CubicOrbit::TripleLine,
    ];

    pub fn label(self) -> &'static str {
        match self {
            CubicOrbit::Nodal => "nodal",
            CubicOrbit::Cuspidal => "cuspidal",
            CubicOrbit::ConicSecant => "conic+secant",
            CubicOrbit::ConicTangent => "conic+tangent",
            CubicOrbit::Triangle => "triangle",
            CubicOrbit::Asterisk => "asterisk",
            CubicOrbit::LineDoubleLine => "line+double-line",
            CubicOrbit::TripleLine => "triple-line",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CubicClass {
    #[serde(rename = "smooth")]
    Smooth,
    #[serde(untagged)]
    Orbit(CubicOrbit),
}

impl CubicClass {
    pub fn label(self) -> &'static str {
        match self {
            CubicClass::Smooth => "smooth",
            CubicClass::Orbit(o) => o.label(),
        }
    }
}

/// A component of the tangent cone to the discriminant.
#[derive(Debug, Clone, PartialEq)]
pub enum ConeComponent {
    /// Cubics vanishing at `point`, with a scheme multiplicity.
    HyperplaneAtPoint { point: Vec<Rational>, multiplicity: usize },
    /// Cubics whose restriction to the line `line . x = 0` is a singular
    /// binary cubic (a cone of degree 4).
    SingularRestriction { line: Vec<Rational>, multiplicity: usize },
}

impl ConeComponent {
    pub fn degree(&self) -> usize {
        match self {
            ConeComponent::HyperplaneAtPoint { multiplicity, .. } => *multiplicity,
            ConeComponent::SingularRestriction { multiplicity, .. } => 4 * multiplicity,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitDescriptor {
    pub orbit: CubicOrbit,
    pub representative: SymForm,
    pub multiplicity: usize,
    pub tangent_cone: Vec<ConeComponent>,
    /// Normal forms of `g` restricted to the line of a
    /// [`ConeComponent::SingularRestriction`] component, in `(x1, x2)`.
    pub restriction_normal_forms: Vec<MPoly<Rational>>,
}

fn cubic(text: &str) -> SymForm {
    SymForm::new(2, 3, parse_poly(text, 3).expect("valid literal")).expect("cubic literal")
}

fn point(c: [i64; 3]) -> Vec<Rational> {
    c.iter().map(|&v| q(v)).collect()
}

fn at(c: [i64; 3], multiplicity: usize) -> ConeComponent {
    ConeComponent::HyperplaneAtPoint {
        point: point(c),
        multiplicity,
    }
}

fn binaries(texts: &[&str]) -> Vec<MPoly<Rational>> {
    texts.iter().map(|t| parse_poly(t, 2).expect("valid literal")).collect()
}

pub fn orbit_table() -> Vec<OrbitDescriptor> {
    let x0_line = |multiplicity| ConeComponent::SingularRestriction {
        line: point([1, 0, 0]),
        multiplicity,
    };
    let d = |orbit, text: &str, multiplicity, tangent_cone, nf: Vec<MPoly<Rational>>| OrbitDescriptor {
        orbit,
        representative: cubic(text),
        multiplicity,
        tangent_cone,
        restriction_normal_forms: nf,
    };
    vec![
        d(CubicOrbit::Nodal, "x0*x1^2-x2^3+x0*x2^2", 1, vec![at([1, 0, 0], 1)], vec![]),
        d(CubicOrbit::Cuspidal, "x0*x1^2-x2^3", 2, vec![at([1, 0, 0], 2)], vec![]),
        d(CubicOrbit::ConicSecant, "x0^3+x0*x1*x2", 2, vec![at([0, 1, 0], 1), at([0, 0, 1], 1)], vec![]),
        d(CubicOrbit::ConicTangent, "x0^2*x1+x0*x2^2", 3, vec![at([0, 1, 0], 3)], vec![]),
        d(
            CubicOrbit::Triangle,
            "x0*x1*x2",
            3,
            vec![at([1, 0, 0], 1), at([0, 1, 0], 1), at([0, 0, 1], 1)],
            vec![],
        ),
        d(CubicOrbit::Asterisk, "x0^2*x1+x0*x1^2", 4, vec![at([0, 0, 1], 4)], vec![]),
        d(
            CubicOrbit::LineDoubleLine,
            "x0^2*x1",
            6,
            vec![at([0, 0, 1], 2), x0_line(1)],
            binaries(&["x0^3", "x1^3", "x0*x1^2+x1^3", "x0^2*x1", "x0*x1^2"]),
        ),
        d(CubicOrbit::TripleLine, "x0^3", 8, vec![x0_line(2)], binaries(&["x0^3", "x0^2*x1"])),
    ]
}

pub fn descriptor(orbit: CubicOrbit) -> OrbitDescriptor {
    orbit_table().into_iter().find(|o| o.orbit == orbit).expect("every orbit is tabulated")
}

fn check_cubic(f: &SymForm) -> Result<()> {
    if f.n() != 2 || f.d() != 3 {
        return Err(Error::Unsupported {
            n: f.n(),
            d: f.d(),
            reason: "plane cubics only".into(),
        });
    }
    Ok(())
}

/// Common zeros of the partial derivatives.
pub fn singular_points_cubic(f: &SymForm) -> Result<ZeroSet> {
    check_cubic(f)?;
    common_zeros_ternary_quadrics(f.to_ps().components())
}

fn coefficient_rank(fs: &[MPoly<Rational>]) -> usize {
    let rows: Vec<Vec<Rational>> = fs.iter().map(|f| f.to_dense(2)).collect();
    Matrix::from_rows(rows).rank()
}

fn hessian_at(f: &MPoly<Rational>, p: &[Rational]) -> Result<Matrix<Rational>> {
    let mut rows = Vec::new();
    for i in 0..3 {
        let di = f.partial_derivative(i)?;
        let mut row = Vec::new();
        for j in 0..3 {
            row.push(di.partial_derivative(j)?.eval(p)?);
        }
        rows.push(row);
    }
    Ok(Matrix::from_rows(rows))
}

/// `f` restricted to the line `{l . x = 0}`, as a binary form in a basis of
/// the line.
fn restrict_to_line(f: &MPoly<Rational>, l: &[Rational]) -> Result<MPoly<Rational>> {
    let kernel = Matrix::from_rows(vec![l.to_vec()]).nullspace();
    if kernel.len() != 2 {
        return Err(Error::Degenerate("linear form is zero".into()));
    }
    let sub: Vec<Vec<Rational>> = (0..3).map(|i| vec![kernel[0][i].clone(), kernel[1][i].clone()]).collect();
    f.linear_substitution(&sub)
}

pub fn classify_cubic(f: &SymForm) -> Result<CubicClass> {
    check_cubic(f)?;
    if f.form().is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !discriminant(f)?.is_zero() {
        return Ok(CubicClass::Smooth);
    }
    let grads = f.to_ps().components().to_vec();
    let orbit = match singular_points_cubic(f)? {
        ZeroSet::Curve => match coefficient_rank(&grads) {
            1 => CubicOrbit::TripleLine,
            2 => CubicOrbit::LineDoubleLine,
            r => return Err(Error::Inconclusive(format!("singular curve with gradient rank {r}"))),
        },
        ZeroSet::Points(p) => match p.len() {
            3 => CubicOrbit::Triangle,
            2 => CubicOrbit::ConicSecant,
            1 => {
                let Some(p) = &p[0].exact else {
                    return Err(Error::Inconclusive("isolated singular point is not rational".into()));
                };
                let h = hessian_at(f.form(), p)?;
                match h.rank() {
                    3 | 2 => CubicOrbit::Nodal,
                    0 => CubicOrbit::Asterisk,
                    _ => {
                        let l = (0..3)
                            .map(|i| h.row(i).to_vec())
                            .find(|r| r.iter().any(|c| !c.is_zero()))
                            .expect("rank one");
                        if restrict_to_line(f.form(), &l)?.is_zero() {
                            CubicOrbit::ConicTangent
                        } else {
                            CubicOrbit::Cuspidal
                        }
                    }
                }
            }
            k => return Err(Error::Inconclusive(format!("{k} singular points on a singular cubic"))),
        },
    };
    Ok(CubicClass::Orbit(orbit))
}

/// Set-theoretic membership of `g` in the tangent cone described by `desc`.
pub fn tangent_cone_contains_cubic(desc: &OrbitDescriptor, g: &SymForm) -> Result<bool> {
    check_cubic(g)?;
    for c in &desc.tangent_cone {
        let hit = match c {
            ConeComponent::HyperplaneAtPoint { point, .. } => g.form().eval(point)?.is_zero(),
            ConeComponent::SingularRestriction { line, .. } => {
                let r = restrict_to_line(g.form(), line)?;
                r.is_zero() || discriminant(&SymForm::new(1, 3, r)?)?.is_zero()
            }
        };
        if hit {
            return Ok(true);
        }
    }
    Ok(false)
}

/// A random cubic in the `component`-th tangent-cone component of `desc`.
///
/// For hyperplane components one coefficient is solved for; for the
/// singular-restriction component (always the line `x0 = 0` in the table)
/// `g = x0 q + c N(x1, x2)` with `N` a listed normal form.
pub fn sample_tangent_cone<R: Rng>(rng: &mut R, desc: &OrbitDescriptor, component: usize) -> Result<SymForm> {
    let comp = &desc.tangent_cone[component % desc.tangent_cone.len()];
    match comp {
        ConeComponent::HyperplaneAtPoint { point, .. } => {
            let g = random::form(rng, 3, 3);
            let k = point.iter().position(|c| !c.is_zero()).expect("projective point");
            let mut e = vec![0u32; 3];
            e[k] = 3;
            let m = Monomial::new(e);
            let rest = &g - &MPoly::from_terms(3, [(m.clone(), g.coeff(&m))]);
            let c = -rest.eval(point)? / point[k].pow(3);
            SymForm::new(2, 3, &rest + &MPoly::from_terms(3, [(m, c)]))
        }
        ConeComponent::SingularRestriction { line, .. } => {
            if *line != point([1, 0, 0]) || desc.restriction_normal_forms.is_empty() {
                return Err(Error::Unsupported {
                    n: 2,
                    d: 3,
                    reason: "restriction sampling is tabulated for x0 = 0".into(),
                });
            }
            let nf = &desc.restriction_normal_forms[rng.random_range(0..desc.restriction_normal_forms.len())];
            // the binary normal form lives in (x1, x2)
            let lifted = MPoly::from_terms(
                3,
                nf.terms().map(|(m, c)| (Monomial::new(vec![0, m.exps()[0], m.exps()[1]]), c.clone())),
            );
            let quad = random::form(rng, 3, 2);
            let g = &(&MPoly::var(3, 0) * &quad) + &lifted.scale(&random::nonzero_rational(rng));
            SymForm::new(2, 3, g)
        }
    }
}

/// Like [`sample_tangent_cone`], but resampled until `disc(g) != 0`.
pub fn sample_tangent_cone_smooth<R: Rng>(rng: &mut R, desc: &OrbitDescriptor, component: usize) -> Result<SymForm> {
    for _ in 0..50 {
        let g = sample_tangent_cone(rng, desc, component)?;
        if !discriminant(&g)?.is_zero() {
            return Ok(g);
        }
    }
    Err(Error::Degenerate("no smooth cubic found in the tangent cone component".into()))
}

/// `f(A x)`.
pub fn transform_cubic(f: &SymForm, a: &[Vec<Rational>]) -> Result<SymForm> {
    SymForm::new(2, 3, f.form().linear_substitution(a)?)
}
