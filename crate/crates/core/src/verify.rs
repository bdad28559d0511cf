//! The acceptance criteria as runnable checks, shared by the `acceptance`
//! test target and `tenspec verify`.

use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;

use crate::bincubic::bincubic_identities;
use crate::error::Result;
use crate::fiber::{fiber_through, jacobian_rank, random_base_point};
use crate::homotopy::{affine_distance, TrackOptions};
use crate::hurwitz::{binary_multiplicity_law, cubic_multiplicities, hurwitz_sample};
use crate::random;
use crate::resultant::char_poly;
use crate::scalar::Scalar;
use crate::spectra::{eigen_residual, eigenscheme, spectrum, EigenOptions};
use crate::symmetry::{sym_orbit, GroupElement};
use crate::tensor::{eigencount, project_partially_symmetric, PSTensor};
use crate::zeros::{dedup_points, normalize};

pub const CRITERIA: [(u8, &str); 12] = [
    (1, "eigenvalue-count"),
    (2, "symmetrization-invariance"),
    (3, "group-invariance"),
    (4, "binary-multiplicity-law"),
    (5, "bincubic-identities"),
    (6, "hurwitz-binary"),
    (7, "cubic-orbit-multiplicities"),
    (8, "hurwitz-plane-cubics"),
    (9, "fiber-cardinalities"),
    (10, "fiber-contains-orbit"),
    (11, "image-dimensions"),
    (12, "reduced-eigenscheme"),
];

pub const SUITES: [(&str, &[u8]); 5] = [
    ("all", &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12]),
    ("binary", &[4, 5, 6, 9, 10, 11, 12]),
    ("exact", &[1, 2, 3, 5]),
    ("cubic", &[7, 8]),
    ("fiber", &[9, 10, 11]),
];

pub fn suite(name: &str) -> Option<Vec<u8>> {
    SUITES.iter().find(|(s, _)| *s == name).map(|(_, ids)| ids.to_vec())
}

pub fn criterion_name(id: u8) -> Option<&'static str> {
    CRITERIA.iter().find(|(i, _)| *i == id).map(|(_, s)| *s)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    #[serde(skip)]
    pub seconds: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Independent start systems per fiber.
    pub fiber_draws: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 0x5eed,
            fiber_draws: 3,
        }
    }
}

impl VerifyConfig {
    fn seed_for(&self, id: u8) -> u64 {
        self.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(id as u64)
    }
}

type Outcome = Result<(bool, String)>;

fn eigenvalue_count(cfg: &VerifyConfig) -> Outcome {
    let start = Instant::now();
    let mut rng = random::rng(cfg.seed_for(1));
    let mut bad = Vec::new();
    for (n, d) in [(1, 3), (1, 4), (1, 5), (2, 3)] {
        let u = PSTensor::unit(n, d);
        let big_d = eigencount(n, d);
        for k in 0..100 {
            let f = random::sym_form(&mut rng, n, d);
            let cp = char_poly(&f.to_ps(), &u)?;
            let total: usize = spectrum(&cp)?.iter().map(|e| e.multiplicity).sum();
            if cp.degree() != big_d || total != big_d {
                bad.push(format!("({n},{d}) #{k}: degree {} multiplicities {total}", cp.degree()));
            }
        }
    }
    let fast = start.elapsed().as_secs_f64() < 10.0;
    if !fast {
        bad.push("time budget of 10 s exceeded".into());
    }
    Ok((bad.is_empty(), if bad.is_empty() { "400 tensors, degree D and multiplicities summing to D".into() } else { bad.join("; ") }))
}

fn symmetrization_invariance(cfg: &VerifyConfig) -> Outcome {
    let mut rng = random::rng(cfg.seed_for(2));
    let mut bad = Vec::new();
    for (n, d) in [(1, 3), (2, 3)] {
        let u = PSTensor::unit(n, d);
        for k in 0..50 {
            let a = random::dense_tensor(&mut rng, n, d);
            let s = a.symmetrize_tail();
            let lhs = char_poly(&project_partially_symmetric(&a), &u)?;
            let rhs = char_poly(&project_partially_symmetric(&s), &u)?;
            if lhs != rhs {
                bad.push(format!("({n},{d}) #{k}"));
            }
        }
    }
    Ok((bad.is_empty(), if bad.is_empty() { "100 dense tensors".into() } else { format!("char poly differs: {}", bad.join(", ")) }))
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Eigenvector transport is measured by the relative residual
/// `|T(v) - lambda t(v)| / (|T(v)| + |lambda| |t(v)|)`.
fn group_invariance(cfg: &VerifyConfig) -> Outcome {
    let mut rng = random::rng(cfg.seed_for(3));
    let opts = EigenOptions::default();
    let mut bad = Vec::new();
    let mut worst: f64 = 0.0;
    for (n, d) in [(1, 4), (2, 3)] {
        let u = PSTensor::unit(n, d);
        for _ in 0..5 {
            let t = random::ps_tensor(&mut rng, n, d);
            let reference = char_poly(&t, &u)?;
            let pairs = eigenscheme(&t, &u, &opts)?.pairs;
            for _ in 0..10 {
                let g = GroupElement {
                    torus: (0..=n).map(|_| random::nonzero_rational(&mut rng)).collect(),
                    perm: random::permutation(&mut rng, n + 1),
                };
                let gt = g.act(&t)?;
                if char_poly(&gt, &u)? != reference {
                    bad.push(format!("({n},{d}) char poly changed under {g:?}"));
                }
                let gc = gt.map_coeffs(Scalar::to_complex);
                let uc = u.map_coeffs(Scalar::to_complex);
                for p in &pairs {
                    let v = normalize(&g.transport(&p.w.coords));
                    let lambda = p.lambda.value();
                    let scale = norm(&gc.contract(&v)?) + lambda.norm() * norm(&uc.contract(&v)?);
                    worst = worst.max(eigen_residual(&gt, &u, lambda, &v) / scale);
                }
            }
        }
    }
    if worst >= 1e-8 {
        bad.push(format!("transport residual {worst:.2e}"));
    }
    Ok((bad.is_empty(), if bad.is_empty() { format!("100 elements, worst transport residual {worst:.1e}") } else { bad.join("; ") }))
}

fn multiplicity_law(cfg: &VerifyConfig) -> Outcome {
    let mut bad = Vec::new();
    let mut profiles = 0;
    for d in 3..=6 {
        for c in binary_multiplicity_law(d, 20, cfg.seed_for(4).wrapping_add(d as u64))? {
            profiles += 1;
            if !c.holds {
                bad.push(format!("{:?}: expected {} got {}..{}", c.profile, c.expected, c.min_order, c.max_order));
            }
        }
    }
    Ok((bad.is_empty(), if bad.is_empty() { format!("{profiles} root profiles") } else { bad.join("; ") }))
}

fn bincubics(_: &VerifyConfig) -> Outcome {
    let r = bincubic_identities();
    let detail = r
        .identities
        .iter()
        .map(|c| {
            let scalar = c.scalar.as_deref().unwrap_or("none");
            if c.matched {
                format!("f = {}: matched with scalar {scalar}", c.f)
            } else {
                let diffs: Vec<String> = c.mismatches.iter().map(|m| format!("{} computed {} expected {}", m.monomial, m.computed, m.expected)).collect();
                format!("f = {}: scalar {scalar}, mismatch at {}", c.f, diffs.join(", "))
            }
        })
        .collect::<Vec<_>>()
        .join("; ");
    Ok((r.all_matched(), detail))
}

fn hurwitz_binary(cfg: &VerifyConfig) -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for d in 3..=5 {
        let r = hurwitz_sample(1, d, 1000, cfg.seed_for(6).wrapping_add(d as u64))?;
        let constrained: usize = r.strata.iter().map(|s| s.constrained).sum();
        ok &= r.empty() && constrained > 0;
        parts.push(format!("d={d}: max order {} < {} ({constrained} in tangent cone, {} contained)", r.max_order, r.bound, r.contained));
    }
    Ok((ok, parts.join("; ")))
}

fn orbit_multiplicities(cfg: &VerifyConfig) -> Outcome {
    let r = cubic_multiplicities(50, cfg.seed_for(7))?;
    let ok = r.iter().all(|m| m.holds);
    let detail = r
        .iter()
        .map(|m| {
            let got: Vec<String> = m.orders.keys().map(|k| if *k == usize::MAX { "inf".into() } else { k.to_string() }).collect();
            format!("{} {}->{}", m.orbit.label(), m.expected, got.join("/"))
        })
        .collect::<Vec<_>>()
        .join(", ");
    Ok((ok, detail))
}

fn hurwitz_cubics(cfg: &VerifyConfig) -> Outcome {
    let r = hurwitz_sample(2, 3, 200, cfg.seed_for(8))?;
    let detail = r
        .strata
        .iter()
        .map(|s| format!("{} max {}", s.label, s.max_order))
        .collect::<Vec<_>>()
        .join(", ");
    Ok((r.empty(), format!("bound {}: {detail}", r.bound)))
}

/// One fiber computed from several start systems.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiberRun {
    pub d: usize,
    pub expected: usize,
    pub counts: Vec<usize>,
    pub max_residual: f64,
    pub orbit_size: usize,
    /// Per draw, the number of orbit members found in the fiber.
    pub orbit_found: Vec<usize>,
    pub seconds: Vec<f64>,
}

pub const FIBER_COUNTS: [(usize, usize); 4] = [(3, 24), (4, 24), (5, 10), (6, 12)];

pub fn fiber_runs(cfg: &VerifyConfig) -> Result<Vec<FiberRun>> {
    let mut rng = random::rng(cfg.seed_for(9));
    let mut out = Vec::new();
    for (d, expected) in FIBER_COUNTS {
        let f = random::sym_form(&mut rng, 1, d);
        let orbit = sym_orbit(&f)?;
        let mut run = FiberRun {
            d,
            expected,
            counts: Vec::new(),
            max_residual: 0.0,
            orbit_size: orbit.members.len(),
            orbit_found: Vec::new(),
            seconds: Vec::new(),
        };
        for k in 0..cfg.fiber_draws {
            let opts = TrackOptions {
                seed: cfg.seed_for(9).wrapping_add(1000 * d as u64 + k as u64),
                ..TrackOptions::default()
            };
            let start = Instant::now();
            let rep = fiber_through(&f, &opts)?;
            run.seconds.push(start.elapsed().as_secs_f64());
            run.counts.push(rep.count);
            run.max_residual = rep.solutions.iter().map(|s| s.residual).fold(run.max_residual, f64::max);
            run.orbit_found.push(
                orbit
                    .members
                    .iter()
                    .filter(|m| rep.solutions.iter().any(|s| affine_distance(&s.coeffs, &m.numeric) < 1e-6))
                    .count(),
            );
        }
        out.push(run);
    }
    Ok(out)
}

fn fiber_cardinalities(runs: &[FiberRun]) -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for r in runs {
        let stable = r.counts.iter().all(|&c| c == r.expected);
        let fast = r.d != 6 || r.seconds.iter().all(|&s| s < 300.0);
        ok &= stable && fast && r.max_residual < 1e-8;
        parts.push(format!("(1,{}) {:?} expected {}", r.d, r.counts, r.expected));
        if !fast {
            parts.push("(1,6) exceeded 5 min".into());
        }
    }
    let worst = runs.iter().map(|r| r.max_residual).fold(0.0, f64::max);
    parts.push(format!("max residual {worst:.1e}"));
    (ok, parts.join("; "))
}

fn fiber_contains_orbit(runs: &[FiberRun]) -> (bool, String) {
    let ok = runs.iter().all(|r| r.orbit_found.iter().all(|&k| k == r.orbit_size));
    let detail = runs
        .iter()
        .map(|r| format!("(1,{}) {:?} of {}", r.d, r.orbit_found, r.orbit_size))
        .collect::<Vec<_>>()
        .join("; ");
    (ok, detail)
}

fn image_dimensions(cfg: &VerifyConfig) -> Outcome {
    let mut rng = random::rng(cfg.seed_for(11));
    let mut ok = true;
    let mut parts = Vec::new();
    for (d, symmetric, rank, dim) in [(3, true, 4, 4), (4, true, 5, 5), (5, true, 6, 6), (3, false, 4, 6)] {
        let t = PSTensor::unit(1, d);
        let base = random_base_point(&mut rng, 1, d, symmetric);
        let r = jacobian_rank(&base, &t, symmetric)?;
        ok &= r.rank == rank && r.domain_dim == dim;
        let kind = if symmetric { "sym" } else { "ps" };
        parts.push(format!("{kind} (1,{d}) rank {} of domain {}", r.rank, r.domain_dim));
    }
    Ok((ok, parts.join("; ")))
}

fn reduced_eigenscheme(cfg: &VerifyConfig) -> Outcome {
    let mut rng = random::rng(cfg.seed_for(12));
    let u = PSTensor::unit(1, 5);
    let opts = EigenOptions::default();
    let (mut tested, mut drawn) = (0, 0);
    let mut bad = Vec::new();
    while tested < 100 && drawn < 1000 {
        drawn += 1;
        let t = random::sym_form(&mut rng, 1, 5).to_ps();
        let values = spectrum(&char_poly(&t, &u)?)?;
        if values.len() != 8 || values.iter().any(|e| e.multiplicity != 1) {
            continue;
        }
        tested += 1;
        let r = eigenscheme(&t, &u, &opts)?;
        let distinct = dedup_points(r.pairs.iter().map(|p| p.w.clone()).collect()).len();
        if !r.reduced || distinct != 8 {
            bad.push(format!("#{drawn}: {distinct} eigenvectors"));
        }
    }
    if tested < 100 {
        bad.push(format!("only {tested} quintics with distinct eigenvalues"));
    }
    Ok((bad.is_empty(), if bad.is_empty() { format!("{tested} quintics, 8 distinct eigenvectors each") } else { bad.join("; ") }))
}

fn finish(id: u8, outcome: Outcome, seconds: f64) -> CriterionResult {
    let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionResult {
        id,
        name: criterion_name(id).unwrap_or("unknown").to_string(),
        passed,
        detail,
        seconds,
    }
}

/// Runs the listed criteria in order. Criteria 9 and 10 share one set of
/// fiber computations.
pub fn run(ids: &[u8], cfg: &VerifyConfig) -> Vec<CriterionResult> {
    let mut fibers: Option<(Result<Vec<FiberRun>>, f64)> = None;
    let mut out = Vec::new();
    for &id in ids {
        let start = Instant::now();
        let outcome = match id {
            1 => eigenvalue_count(cfg),
            2 => symmetrization_invariance(cfg),
            3 => group_invariance(cfg),
            4 => multiplicity_law(cfg),
            5 => bincubics(cfg),
            6 => hurwitz_binary(cfg),
            7 => orbit_multiplicities(cfg),
            8 => hurwitz_cubics(cfg),
            9 | 10 => {
                let (runs, _) = fibers.get_or_insert_with(|| {
                    let s = Instant::now();
                    let r = fiber_runs(cfg);
                    (r, s.elapsed().as_secs_f64())
                });
                match runs {
                    Ok(runs) if id == 9 => Ok(fiber_cardinalities(runs)),
                    Ok(runs) => Ok(fiber_contains_orbit(runs)),
                    Err(e) => Err(e.clone()),
                }
            }
            11 => image_dimensions(cfg),
            12 => reduced_eigenscheme(cfg),
            _ => Ok((false, "no such criterion".into())),
        };
        out.push(finish(id, outcome, start.elapsed().as_secs_f64()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_name_known_criteria() {
        for (_, ids) in SUITES {
            assert!(ids.iter().all(|&i| criterion_name(i).is_some()));
        }
        assert_eq!(suite("all").unwrap().len(), 12);
        assert!(suite("nope").is_none());
    }

    #[test]
    fn quick_criteria_report() {
        let r = run(&[5, 11, 99], &VerifyConfig::default());
        assert_eq!(r.len(), 3);
        assert!(r[1].passed, "{:?}", r[1]);
        assert!(!r[2].passed);
        assert_eq!(r[0].name, "bincubic-identities");
    }
}
