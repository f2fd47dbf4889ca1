use num_traits::Zero;

use crate::error::{Error, Result};
use crate::logic::{Formula, World, WorldSet};
use crate::prob::{ProbDist, Rational};

/// One remainder: [φ]⁺ plus at most one possible ¬α-world.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Remainder {
    /// The ¬α-world added to [φ]⁺; `None` when the remainder is [φ]⁺ itself.
    pub added: Option<World>,
    pub worlds: WorldSet,
    pub probability: Rational,
}

/// The remainders of φ by α, computed from their single-world characterisation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RemainderSet {
    base: WorldSet,
    base_probability: Rational,
    members: Vec<Remainder>,
}

impl RemainderSet {
    /// Remainders of the world set `phi` by `alpha` (both as model sets).
    pub fn from_worlds(phi: &WorldSet, alpha: &WorldSet, dist: &ProbDist) -> Self {
        let base = dist.possible(phi);
        let base_probability = dist.prob_of_worlds(&base);
        let not_alpha = dist.possible(&alpha.complement());
        let members = if base.is_subset(alpha) && !not_alpha.is_empty() {
            not_alpha
                .iter()
                .map(|w| {
                    let mut worlds = base.clone();
                    worlds.insert(w);
                    Remainder { added: Some(w), worlds, probability: &base_probability + dist.mass(w) }
                })
                .collect()
        } else {
            vec![Remainder { added: None, worlds: base.clone(), probability: base_probability.clone() }]
        };
        RemainderSet { base, base_probability, members }
    }

    /// [φ]⁺.
    pub fn base(&self) -> &WorldSet {
        &self.base
    }

    pub fn base_probability(&self) -> &Rational {
        &self.base_probability
    }

    pub fn members(&self) -> &[Remainder] {
        &self.members
    }

    /// True when the set collapsed to [φ]⁺ alone (φ ⊀_P α, or ⊤ ≤_P α).
    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1 && self.members[0].added.is_none()
    }

    /// The candidate worlds with the probability of [φ]⁺ ∪ {w}.
    pub fn candidates(&self) -> Vec<(World, Rational)> {
        self.members.iter().filter_map(|r| r.added.map(|w| (w, r.probability.clone()))).collect()
    }

    /// κmin: the remainders of maximal probability (least surprise).
    pub fn kappa_min(&self) -> Vec<&Remainder> {
        let best = self.members.iter().map(|r| &r.probability).max().cloned().unwrap_or_else(Rational::zero);
        self.members.iter().filter(|r| r.probability == best).collect()
    }

    /// Union of the κmin remainders: the KM-contraction.
    pub fn selected_union(&self) -> WorldSet {
        self.kappa_min().iter().fold(self.base.clone(), |acc, r| acc.union(&r.worlds))
    }

    /// Union of all remainders: the full-meet contraction.
    pub fn full_union(&self) -> WorldSet {
        self.members.iter().fold(self.base.clone(), |acc, r| acc.union(&r.worlds))
    }
}

/// φ⊥α for formulas; φ must be P-consistent.
pub fn remainders(phi: &Formula, alpha: &Formula, dist: &ProbDist) -> Result<RemainderSet> {
    let phi_m = phi.models(dist.alphabet())?;
    let alpha_m = alpha.models(dist.alphabet())?;
    if !dist.worlds_p_consistent(&phi_m) {
        return Err(Error::PInconsistent);
    }
    Ok(RemainderSet::from_worlds(&phi_m, &alpha_m, dist))
}
