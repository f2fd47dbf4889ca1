//! Change operators evaluated straight from their set-theoretic definitions by
//! enumerating every world subset. Exponential in 2^n; used as test oracles
//! for the closed forms in the parent module.

use crate::error::{Error, Result};
use crate::logic::{Formula, WorldSet};
use crate::prob::ProbDist;

use super::contract_worlds;

/// Largest alphabet for remainder enumeration (2^16 candidate subsets).
pub const REMAINDER_MAX_LETTERS: usize = 4;
/// Largest alphabet for the β-conjunction of severe withdrawal.
pub const SEVERE_MAX_LETTERS: usize = 3;

fn cap(operation: &'static str, letters: usize, max: usize) -> Result<()> {
    if letters > max {
        return Err(Error::ExhaustiveCap { operation, letters, max });
    }
    Ok(())
}

/// Every subset of the worlds over `letters` letters.
fn all_subsets(letters: usize) -> impl Iterator<Item = WorldSet> {
    (0..1u64 << (1usize << letters)).map(move |mask| WorldSet::from_mask(letters, mask))
}

/// Possible remainders of φ by α: every [ψ]⁺ with φ ≤_P ψ and ψ ⊀_P α, one per
/// P-equivalence class; just {[φ]⁺} when ⊤ ≤_P α.
pub fn possible_remainders_worlds(phi: &WorldSet, alpha: &WorldSet, dist: &ProbDist) -> Result<Vec<WorldSet>> {
    let n = phi.letters();
    cap("possible-remainder enumeration", n, REMAINDER_MAX_LETTERS)?;
    let base = dist.possible(phi);
    if dist.worlds_p_entail(&WorldSet::full(n), alpha) {
        return Ok(vec![base]);
    }
    let mut out: Vec<WorldSet> = all_subsets(n)
        .filter(|psi| dist.worlds_p_entail(&base, psi) && !dist.worlds_p_entail(psi, alpha))
        .map(|psi| dist.possible(&psi))
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// The <_P-minimal possible remainders.
pub fn remainders_by_enumeration_worlds(phi: &WorldSet, alpha: &WorldSet, dist: &ProbDist) -> Result<Vec<WorldSet>> {
    let candidates = possible_remainders_worlds(phi, alpha, dist)?;
    Ok(candidates
        .iter()
        .filter(|c| !candidates.iter().any(|d| d != *c && d.is_subset(c)))
        .cloned()
        .collect())
}

/// KM-contraction as the disjunction of the maximal-probability remainders.
pub fn contract_by_enumeration_worlds(phi: &WorldSet, alpha: &WorldSet, dist: &ProbDist) -> Result<WorldSet> {
    let rems = remainders_by_enumeration_worlds(phi, alpha, dist)?;
    let best = rems.iter().map(|r| dist.prob_of_worlds(r)).max();
    let mut out = WorldSet::empty(phi.letters());
    for r in &rems {
        if Some(dist.prob_of_worlds(r)) == best {
            out = out.union(r);
        }
    }
    Ok(out)
}

/// Severe withdrawal as the conjunction of every β with φ ÷ (α ∧ β) ≤_P β,
/// or [φ]⁺ when ⊤ ≤_P α. The result is a model set, comparable up to ≡_P.
pub fn severe_by_definition_worlds(phi: &WorldSet, alpha: &WorldSet, dist: &ProbDist) -> Result<WorldSet> {
    let n = phi.letters();
    cap("severe-withdrawal definition", n, SEVERE_MAX_LETTERS)?;
    if dist.worlds_p_entail(&WorldSet::full(n), alpha) {
        return Ok(dist.possible(phi));
    }
    Ok(all_subsets(n)
        .filter(|beta| dist.worlds_p_entail(&contract_worlds(phi, &alpha.intersection(beta), dist), beta))
        .fold(WorldSet::full(n), |acc, beta| acc.intersection(&beta)))
}

fn models(phi: &Formula, alpha: &Formula, dist: &ProbDist) -> Result<(WorldSet, WorldSet)> {
    let phi_m = phi.models(dist.alphabet())?;
    if !dist.worlds_p_consistent(&phi_m) {
        return Err(Error::PInconsistent);
    }
    Ok((phi_m, alpha.models(dist.alphabet())?))
}

/// [`possible_remainders_worlds`] for formulas.
pub fn possible_remainders(phi: &Formula, alpha: &Formula, dist: &ProbDist) -> Result<Vec<WorldSet>> {
    let (p, a) = models(phi, alpha, dist)?;
    possible_remainders_worlds(&p, &a, dist)
}

/// [`remainders_by_enumeration_worlds`] for formulas.
pub fn remainders_by_enumeration(phi: &Formula, alpha: &Formula, dist: &ProbDist) -> Result<Vec<WorldSet>> {
    let (p, a) = models(phi, alpha, dist)?;
    remainders_by_enumeration_worlds(&p, &a, dist)
}

/// [`contract_by_enumeration_worlds`] for formulas.
pub fn contract_by_enumeration(phi: &Formula, alpha: &Formula, dist: &ProbDist) -> Result<WorldSet> {
    let (p, a) = models(phi, alpha, dist)?;
    contract_by_enumeration_worlds(&p, &a, dist)
}

/// [`severe_by_definition_worlds`] for formulas.
pub fn severe_by_definition(phi: &Formula, alpha: &Formula, dist: &ProbDist) -> Result<WorldSet> {
    let (p, a) = models(phi, alpha, dist)?;
    severe_by_definition_worlds(&p, &a, dist)
}
