//! Sampling lines through singular points of the discriminant: orders of
//! contact, the multiplicity law for binary forms, and the search for lines
//! of maximal contact.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::Rng;
use serde::Serialize;

use crate::cubic::{orbit_table, sample_tangent_cone_smooth, CubicOrbit};
use crate::disc::{line_order, mult_disc_binary, LineOrder};
use crate::error::{Error, Result};
use crate::poly::MPoly;
use crate::random::{self, Rng64};
use crate::scalar::Rational;
use crate::tensor::{eigencount, SymForm};

/// Partitions of `d` (parts in decreasing order).
pub fn partitions(d: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(acc.clone());
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            acc.push(p);
            go(rest - p, p, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(d, d, &mut Vec::new(), &mut out);
    out
}

/// Partitions of `d` with a part of size at least two.
pub fn singular_profiles(d: usize) -> Vec<Vec<usize>> {
    partitions(d).into_iter().filter(|p| p[0] >= 2).collect()
}

/// A binary form `c * prod l_j^{e_j}` for pairwise independent random
/// linear forms `l_j`. Returns the form and the linear factors.
pub fn binary_with_profile<R: Rng>(rng: &mut R, profile: &[usize]) -> (SymForm, Vec<MPoly<Rational>>) {
    let mut lines: Vec<MPoly<Rational>> = Vec::new();
    while lines.len() < profile.len() {
        let l = MPoly::from_dense(2, 1, &[random::small_int(rng, 9), random::small_int(rng, 9)]).expect("length 2");
        if l.is_zero() {
            continue;
        }
        let [a, b] = [l.to_dense(1)[0].clone(), l.to_dense(1)[1].clone()];
        if lines.iter().any(|m| {
            let c = m.to_dense(1);
            (&a * &c[1] - &b * &c[0]).is_zero()
        }) {
            continue;
        }
        lines.push(l);
    }
    let c = random::nonzero_rational(rng);
    let f = profile
        .iter()
        .zip(&lines)
        .fold(MPoly::constant(2, c), |acc, (&e, l)| &acc * &l.pow(e as u32));
    let d = profile.iter().sum();
    (SymForm::new(1, d, f).expect("homogeneous"), lines)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProfileCheck {
    pub profile: Vec<usize>,
    pub expected: usize,
    pub orders: Vec<usize>,
    pub max_order: usize,
    pub min_order: usize,
    pub holds: bool,
}

/// Generic-line order through a random form with each singular root profile
/// of degree `d`, over `lines` random lines.
pub fn binary_multiplicity_law(d: usize, lines: usize, seed: u64) -> Result<Vec<ProfileCheck>> {
    let mut rng = random::rng(seed);
    let mut out = Vec::new();
    for profile in singular_profiles(d) {
        let (f, _) = binary_with_profile(&mut rng, &profile);
        let expected: usize = profile.iter().map(|e| e - 1).sum();
        let formula = mult_disc_binary(&f)?;
        let mut orders = Vec::new();
        while orders.len() < lines {
            let g = random::sym_form(&mut rng, 1, d);
            match line_order(&f, &g) {
                Ok(LineOrder::Finite(k)) => orders.push(k),
                Ok(LineOrder::Contained) => orders.push(usize::MAX),
                Err(Error::Proportional) => continue,
                Err(e) => return Err(e),
            }
        }
        let max_order = *orders.iter().max().expect("nonempty");
        let min_order = *orders.iter().min().expect("nonempty");
        out.push(ProfileCheck {
            holds: formula == expected && max_order == expected && min_order == expected,
            profile,
            expected,
            orders,
            max_order,
            min_order,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HurwitzStratum {
    pub label: String,
    pub trials: usize,
    pub constrained: usize,
    pub max_order: usize,
    /// Lines contained in the discriminant; these have no finite order and
    /// are not lines of the Hurwitz family.
    pub contained: usize,
    pub histogram: BTreeMap<usize, usize>,
}

impl HurwitzStratum {
    fn new(label: String) -> Self {
        HurwitzStratum {
            label,
            trials: 0,
            constrained: 0,
            max_order: 0,
            contained: 0,
            histogram: BTreeMap::new(),
        }
    }

    fn record(&mut self, order: LineOrder, constrained: bool) {
        self.trials += 1;
        if constrained {
            self.constrained += 1;
        }
        match order {
            LineOrder::Finite(k) => {
                *self.histogram.entry(k).or_default() += 1;
                self.max_order = self.max_order.max(k);
            }
            LineOrder::Contained => self.contained += 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HurwitzReport {
    pub n: usize,
    pub d: usize,
    /// The degree of the discriminant; a line of this order would lie in
    /// the Hurwitz variety.
    pub bound: usize,
    pub trials: usize,
    pub max_order: usize,
    pub contained: usize,
    pub histogram: BTreeMap<usize, usize>,
    pub strata: Vec<HurwitzStratum>,
}

impl HurwitzReport {
    pub fn empty(&self) -> bool {
        self.max_order < self.bound
    }

    fn from_strata(n: usize, d: usize, strata: Vec<HurwitzStratum>) -> Self {
        let mut histogram = BTreeMap::new();
        for s in &strata {
            for (k, c) in &s.histogram {
                *histogram.entry(*k).or_default() += c;
            }
        }
        HurwitzReport {
            n,
            d,
            bound: eigencount(n, d),
            trials: strata.iter().map(|s| s.trials).sum(),
            max_order: strata.iter().map(|s| s.max_order).max().unwrap_or(0),
            contained: strata.iter().map(|s| s.contained).sum(),
            histogram,
            strata,
        }
    }
}

fn profile_label(p: &[usize]) -> String {
    p.iter().map(usize::to_string).collect::<Vec<_>>().join("+")
}

fn binary_trial(rng: &mut Rng64, f: &SymForm, lines: &[MPoly<Rational>], profile: &[usize], constrained: bool) -> Result<LineOrder> {
    let d = f.d();
    loop {
        let g = if constrained {
            let repeated: Vec<usize> = (0..profile.len()).filter(|&j| profile[j] >= 2).collect();
            let j = repeated[rng.random_range(0..repeated.len())];
            let h = random::form(rng, 2, d as u32 - 1);
            SymForm::new(1, d, &lines[j] * &h)?
        } else {
            random::sym_form(rng, 1, d)
        };
        match line_order(f, &g) {
            Err(Error::Proportional) => continue,
            r => return r,
        }
    }
}

/// Random lines through random singular points of the discriminant.
///
/// For binary forms the singular point is drawn with a random root profile
/// and every other line is constrained to the tangent cone. For plane cubics
/// `trials` lines are drawn per orbit, all in the tangent cone and with
/// `disc(g) != 0`, cycling over the cone components.
pub fn hurwitz_sample(n: usize, d: usize, trials: usize, seed: u64) -> Result<HurwitzReport> {
    let mut rng = random::rng(seed);
    match (n, d) {
        (1, d) if (3..=8).contains(&d) => {
            let profiles = singular_profiles(d);
            let mut strata: Vec<HurwitzStratum> = profiles.iter().map(|p| HurwitzStratum::new(profile_label(p))).collect();
            for trial in 0..trials {
                let k = rng.random_range(0..profiles.len());
                let (f, lines) = binary_with_profile(&mut rng, &profiles[k]);
                let constrained = trial % 2 == 1;
                let order = binary_trial(&mut rng, &f, &lines, &profiles[k], constrained)?;
                strata[k].record(order, constrained);
            }
            Ok(HurwitzReport::from_strata(n, d, strata))
        }
        (2, 3) => {
            let mut strata = Vec::new();
            for desc in orbit_table() {
                let mut s = HurwitzStratum::new(desc.orbit.label().to_string());
                for trial in 0..trials {
                    let g = sample_tangent_cone_smooth(&mut rng, &desc, trial)?;
                    s.record(line_order(&desc.representative, &g)?, true);
                }
                strata.push(s);
            }
            Ok(HurwitzReport::from_strata(n, d, strata))
        }
        (n, d) => Err(Error::Unsupported {
            n,
            d,
            reason: "line sampling covers binary forms of degree 3..8 and plane cubics".into(),
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitMultiplicity {
    pub orbit: CubicOrbit,
    pub expected: usize,
    pub orders: BTreeMap<usize, usize>,
    pub holds: bool,
}

/// Generic-line orders at each plane-cubic orbit representative.
pub fn cubic_multiplicities(lines: usize, seed: u64) -> Result<Vec<OrbitMultiplicity>> {
    let mut rng = random::rng(seed);
    let mut out = Vec::new();
    for desc in orbit_table() {
        let mut orders: BTreeMap<usize, usize> = BTreeMap::new();
        let mut n = 0;
        while n < lines {
            let g = random::generic_sym_form(&mut rng, 2, 3);
            match line_order(&desc.representative, &g) {
                Ok(LineOrder::Finite(k)) => *orders.entry(k).or_default() += 1,
                Ok(LineOrder::Contained) => *orders.entry(usize::MAX).or_default() += 1,
                Err(Error::Proportional) => continue,
                Err(e) => return Err(e),
            }
            n += 1;
        }
        out.push(OrbitMultiplicity {
            orbit: desc.orbit,
            expected: desc.multiplicity,
            holds: orders.len() == 1 && orders.contains_key(&desc.multiplicity),
            orders,
        });
    }
    Ok(out)
}
