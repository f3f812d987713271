//! Finitely supported probability measures on a group.

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec};
use std::collections::BTreeMap;

const MASS_TOL: f64 = 1e-12;

/// A finitely supported probability measure. Masses are positive and sum to
/// one within 1e-12. For free groups the support must touch every generator
/// direction (the documented surrogate for semigroup generation); measures
/// failing it are flagged degenerate and rejected by the entropy machinery.
#[derive(Debug, Clone, PartialEq)]
pub struct Measure {
    spec: GroupSpec,
    terms: BTreeMap<GroupElement, f64>,
    degenerate: bool,
}

impl Measure {
    pub fn new(spec: GroupSpec, terms: Vec<(GroupElement, f64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (g, m) in terms {
            if !spec.contains(&g) {
                return Err(Error::structural(format!(
                    "measure atom {g:?} does not belong to {spec}"
                )));
            }
            if !(m > 0.0) {
                return Err(Error::precondition(format!(
                    "measure masses must be positive, got {m}"
                )));
            }
            *map.entry(g).or_insert(0.0) += m;
        }
        let total: f64 = map.values().sum();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::precondition(format!(
                "measure masses sum to {total}, expected 1 within {MASS_TOL}"
            )));
        }
        let degenerate = is_degenerate(&spec, &map);
        Ok(Measure {
            spec,
            terms: map,
            degenerate,
        })
    }

    /// Simple random walk: uniform on generators and inverses.
    pub fn srw(spec: &GroupSpec) -> Result<Self> {
        let k = spec.num_generators();
        let mass = 1.0 / (2 * k) as f64;
        let mut terms = Vec::new();
        for i in 1..=k {
            terms.push((spec.generator(i, 1)?, mass));
            terms.push((spec.generator(i, -1)?, mass));
        }
        Measure::new(spec.clone(), terms)
    }

    /// Lazy walk: mass `q` at the identity, the rest uniform on generators
    /// and inverses.
    pub fn lazy(spec: &GroupSpec, q: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&q) {
            return Err(Error::precondition("lazy mass must lie in [0, 1)"));
        }
        let k = spec.num_generators();
        let mass = (1.0 - q) / (2 * k) as f64;
        let mut terms = Vec::new();
        if q > 0.0 {
            terms.push((spec.identity(), q));
        }
        for i in 1..=k {
            terms.push((spec.generator(i, 1)?, mass));
            terms.push((spec.generator(i, -1)?, mass));
        }
        Measure::new(spec.clone(), terms)
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GroupElement, f64)> {
        self.terms.iter().map(|(g, &m)| (g, m))
    }

    pub fn mass(&self, g: &GroupElement) -> f64 {
        self.terms.get(g).copied().unwrap_or(0.0)
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn support_radius(&self) -> usize {
        self.terms
            .keys()
            .map(|g| self.spec.length(g))
            .max()
            .unwrap_or(0)
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    /// Is the support contained in {generators, inverses} (no identity)?
    pub fn is_nearest_neighbor(&self) -> bool {
        self.terms.keys().all(|g| self.spec.length(g) == 1)
    }

    /// Nearest-neighbor up to lazy mass, with all letter masses equal.
    pub fn is_radial_nearest_neighbor(&self) -> bool {
        let mut letter_mass = None;
        for (g, &m) in &self.terms {
            match self.spec.length(g) {
                0 => {}
                1 => match letter_mass {
                    None => letter_mass = Some(m),
                    Some(x) if (x - m).abs() <= 1e-15 => {}
                    _ => return false,
                },
                _ => return false,
            }
        }
        // all 2k directions must be present
        let k = self.spec.num_generators();
        self.terms.iter().filter(|(g, _)| self.spec.length(g) == 1).count() == 2 * k
    }

    /// Exact convolution (mu * nu)(t) = sum_s mu(s) nu(s^{-1} t). The
    /// resulting support is capped.
    pub fn convolve(&self, other: &Measure, cap: usize) -> Result<Measure> {
        if self.spec != other.spec {
            return Err(Error::structural("measure convolution: specs differ"));
        }
        let mut out: BTreeMap<GroupElement, f64> = BTreeMap::new();
        for (s, &ms) in &self.terms {
            for (u, &mu) in &other.terms {
                let t = self.spec.compose_unchecked(s, u);
                *out.entry(t).or_insert(0.0) += ms * mu;
                if out.len() > cap {
                    return Err(Error::Resource {
                        what: "convolution support".into(),
                        required: out.len(),
                        cap,
                    });
                }
            }
        }
        let degenerate = is_degenerate(&self.spec, &out);
        Ok(Measure {
            spec: self.spec.clone(),
            terms: out,
            degenerate,
        })
    }
}

fn is_degenerate(spec: &GroupSpec, terms: &BTreeMap<GroupElement, f64>) -> bool {
    match spec {
        GroupSpec::Free { rank } => {
            // every letter must occur somewhere in the support
            let mut seen = vec![false; 2 * rank];
            for g in terms.keys() {
                if let GroupElement::Word(w) = g {
                    for &l in w.iter() {
                        seen[crate::group::letter_index(l)] = true;
                    }
                }
            }
            !seen.iter().all(|&b| b)
        }
        _ => terms.is_empty() || terms.keys().all(|g| *g == spec.identity()),
    }
}
