use crate::error::{Error, Result};
use crate::logic::{Formula, WorldSet};
use crate::prob::{ProbDist, Rational};

/// Nested spheres around [φ]⁺: each annulus holds the remaining possible
/// worlds of one mass, in strictly decreasing mass order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SphereSystem {
    center: WorldSet,
    annuli: Vec<(Rational, WorldSet)>,
}

impl SphereSystem {
    pub fn from_worlds(phi: &WorldSet, dist: &ProbDist) -> Self {
        let center = dist.possible(phi);
        let rest = dist.support().difference(&center);
        let mut masses: Vec<&Rational> = rest.iter().map(|w| dist.mass(w)).collect();
        masses.sort_unstable_by(|a, b| b.cmp(a));
        masses.dedup();
        let annuli = masses
            .into_iter()
            .map(|m| (m.clone(), WorldSet::from_worlds(center.letters(), rest.iter().filter(|&w| dist.mass(w) == m))))
            .collect();
        SphereSystem { center, annuli }
    }

    pub fn center(&self) -> &WorldSet {
        &self.center
    }

    /// Annuli from the innermost outwards, each with its common world mass.
    pub fn annuli(&self) -> &[(Rational, WorldSet)] {
        &self.annuli
    }

    /// The spheres σ_0 ⊂ σ_1 ⊂ … ⊂ σ_k, starting with the center.
    pub fn spheres(&self) -> Vec<WorldSet> {
        let mut out = vec![self.center.clone()];
        for (_, annulus) in &self.annuli {
            let next = out.last().expect("non-empty").union(annulus);
            out.push(next);
        }
        out
    }

    /// The smallest sphere meeting `worlds`, if any sphere does.
    pub fn smallest_meeting(&self, worlds: &WorldSet) -> Option<WorldSet> {
        self.spheres().into_iter().find(|s| !s.is_disjoint(worlds))
    }
}

/// The sphere system centred on φ; φ must be P-consistent.
pub fn spheres(phi: &Formula, dist: &ProbDist) -> Result<SphereSystem> {
    let phi_m = phi.models(dist.alphabet())?;
    if !dist.worlds_p_consistent(&phi_m) {
        return Err(Error::PInconsistent);
    }
    Ok(SphereSystem::from_worlds(&phi_m, dist))
}
