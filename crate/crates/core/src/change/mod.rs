//! Belief change operators selecting the least surprising worlds.
//!
//! The world-level functions (`*_worlds`) work on possible-world sets and are
//! what the postulate checkers drive; the formula-level functions wrap them
//! with validation and report the information measure of the change.

pub mod definitional;
mod remainders;
mod spheres;

use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::logic::{formula_of_worlds, Formula, WorldSet};
use crate::measures::{kappa_s, log2_rational, KmValue};
use crate::prob::ProbDist;

pub use remainders::{remainders, Remainder, RemainderSet};
pub use spheres::{spheres, SphereSystem};

/// min_κ: every possible world of `worlds` with maximal mass (all ties kept).
pub fn min_kappa(worlds: &WorldSet, dist: &ProbDist) -> WorldSet {
    dist.heaviest_worlds(worlds)
}

/// KM-contraction on worlds: [φ]⁺ ∪ min_κ([¬α]⁺) when φ ≤_P α, else [φ]⁺.
pub fn contract_worlds(phi: &WorldSet, alpha: &WorldSet, dist: &ProbDist) -> WorldSet {
    let base = dist.possible(phi);
    if base.is_subset(alpha) {
        base.union(&min_kappa(&dist.possible(&alpha.complement()), dist))
    } else {
        base
    }
}

/// Full-meet contraction on worlds: [φ]⁺ ∪ [¬α]⁺ when φ ≤_P α, else [φ]⁺.
pub fn full_meet_worlds(phi: &WorldSet, alpha: &WorldSet, dist: &ProbDist) -> WorldSet {
    let base = dist.possible(phi);
    if base.is_subset(alpha) {
        base.union(&dist.possible(&alpha.complement()))
    } else {
        base
    }
}

/// KM-revision on worlds: min_κ([α]⁺) when φ ≤_P ¬α, else [φ]⁺ ∩ [α]⁺.
pub fn revise_worlds(phi: &WorldSet, alpha: &WorldSet, dist: &ProbDist) -> WorldSet {
    let base = dist.possible(phi);
    if base.is_disjoint(alpha) {
        min_kappa(&dist.possible(alpha), dist)
    } else {
        base.intersection(alpha)
    }
}

/// Revision through the Levi identity: (φ ÷ ¬α) ∧ α.
pub fn levi_revise_worlds(phi: &WorldSet, alpha: &WorldSet, dist: &ProbDist) -> WorldSet {
    contract_worlds(phi, &alpha.complement(), dist).intersection(alpha)
}

/// σ(¬α): the smallest sphere around [φ]⁺ meeting [¬α]⁺, or [φ]⁺ itself when
/// it already meets [¬α]⁺ or when [¬α]⁺ is empty.
pub fn sigma_worlds(phi: &WorldSet, alpha: &WorldSet, dist: &ProbDist) -> WorldSet {
    let base = dist.possible(phi);
    let neg = dist.possible(&alpha.complement());
    if !base.is_subset(alpha) {
        return base;
    }
    let Some(reference) = dist.heaviest_worlds(&neg).iter().next() else {
        return base;
    };
    base.union(&dist.at_least_as_heavy(&base.complement(), reference))
}

/// KM-severe withdrawal on worlds; identical to [`sigma_worlds`].
pub fn severe_worlds(phi: &WorldSet, alpha: &WorldSet, dist: &ProbDist) -> WorldSet {
    sigma_worlds(phi, alpha, dist)
}

/// Which operator produced a [`ChangeReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OperatorTag {
    Contraction,
    FullMeetContraction,
    SevereWithdrawal,
    Expansion,
    Revision,
    LeviRevision,
}

impl fmt::Display for OperatorTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OperatorTag::Contraction => "contraction",
            OperatorTag::FullMeetContraction => "full-meet contraction",
            OperatorTag::SevereWithdrawal => "severe withdrawal",
            OperatorTag::Expansion => "expansion",
            OperatorTag::Revision => "revision",
            OperatorTag::LeviRevision => "revision (Levi identity)",
        })
    }
}

/// Which information measure a report carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureKind {
    /// L = κ(φ) − κ(result)
    Loss,
    /// G = κ(φ ∧ α) − κ(φ)
    Gain,
    /// R = κ(result) − κ(φ)
    Change,
}

impl MeasureKind {
    pub fn symbol(self) -> &'static str {
        match self {
            MeasureKind::Loss => "L",
            MeasureKind::Gain => "G",
            MeasureKind::Change => "R",
        }
    }
}

/// Result of a change operation: the new belief, its possible worlds, and the
/// information measure computed both from its definition and in closed form.
/// Infinite measures are `f64::INFINITY`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChangeReport {
    pub operator: OperatorTag,
    pub result: Formula,
    pub result_worlds: WorldSet,
    pub kind: MeasureKind,
    pub measure: f64,
    pub closed_form: f64,
}

impl ChangeReport {
    fn new(
        operator: OperatorTag,
        worlds: WorldSet,
        dist: &ProbDist,
        kind: MeasureKind,
        measure: f64,
        closed_form: f64,
    ) -> Self {
        ChangeReport {
            operator,
            result: formula_of_worlds(&worlds, dist.alphabet()),
            result_worlds: worlds,
            kind,
            measure,
            closed_form,
        }
    }

    pub fn loss(&self) -> Option<f64> {
        (self.kind == MeasureKind::Loss).then_some(self.measure)
    }

    pub fn gain(&self) -> Option<f64> {
        (self.kind == MeasureKind::Gain).then_some(self.measure)
    }

    pub fn change(&self) -> Option<f64> {
        (self.kind == MeasureKind::Change).then_some(self.measure)
    }

    /// True when the result is P-inconsistent (revision by a P-unsatisfiable α).
    pub fn is_inconsistent(&self) -> bool {
        self.result_worlds.is_empty()
    }
}

// κ_S difference a − b in the extended reals, where at most one side is infinite.
fn km_diff(a: KmValue, b: KmValue) -> f64 {
    match (a, b) {
        (KmValue::Finite(x), KmValue::Finite(y)) => x - y,
        (KmValue::Infinite, _) => f64::INFINITY,
        (_, KmValue::Infinite) => f64::NEG_INFINITY,
    }
}

fn log2_ratio(num: &BigRational, den: &BigRational) -> f64 {
    if num.is_zero() {
        return f64::NEG_INFINITY;
    }
    log2_rational(&(num / den))
}

/// Models of `phi` and `alpha`, requiring φ to be P-consistent.
fn prepare(phi: &Formula, alpha: &Formula, dist: &ProbDist) -> Result<(WorldSet, WorldSet)> {
    let phi_models = phi.models(dist.alphabet())?;
    let alpha_models = alpha.models(dist.alphabet())?;
    if !dist.worlds_p_consistent(&phi_models) {
        return Err(Error::PInconsistent);
    }
    Ok((phi_models, alpha_models))
}

fn loss_report(
    operator: OperatorTag,
    phi: &Formula,
    worlds: WorldSet,
    dist: &ProbDist,
    closed_form: f64,
) -> Result<ChangeReport> {
    let result = formula_of_worlds(&worlds, dist.alphabet());
    let measure = km_diff(kappa_s(phi, dist)?, kappa_s(&result, dist)?);
    Ok(ChangeReport::new(operator, worlds, dist, MeasureKind::Loss, measure, closed_form))
}

/// KM-contraction φ ÷ α, with information loss L.
pub fn contract(phi: &Formula, alpha: &Formula, dist: &ProbDist) -> Result<ChangeReport> {
    let (phi_m, alpha_m) = prepare(phi, alpha, dist)?;
    let worlds = contract_worlds(&phi_m, &alpha_m, dist);
    let p_phi = dist.prob_of_worlds(&phi_m);
    let closed = if dist.worlds_p_entail(&phi_m, &alpha_m) {
        let p_min = dist.prob_of_worlds(&min_kappa(&dist.possible(&alpha_m.complement()), dist));
        log2_rational(&(BigRational::from_integer(1.into()) + p_min / &p_phi))
    } else {
        0.0
    };
    loss_report(OperatorTag::Contraction, phi, worlds, dist, closed)
}

/// Full-meet contraction: the disjunction of all remainders.
pub fn full_meet_contract(phi: &Formula, alpha: &Formula, dist: &ProbDist) -> Result<ChangeReport> {
    let (phi_m, alpha_m) = prepare(phi, alpha, dist)?;
    let worlds = full_meet_worlds(&phi_m, &alpha_m, dist);
    let closed = log2_ratio(&dist.prob_of_worlds(&worlds), &dist.prob_of_worlds(&phi_m));
    loss_report(OperatorTag::FullMeetContraction, phi, worlds, dist, closed)
}

/// KM-severe withdrawal: the smallest sphere meeting [¬α]⁺.
pub fn severe_withdraw(phi: &Formula, alpha: &Formula, dist: &ProbDist) -> Result<ChangeReport> {
    let (phi_m, alpha_m) = prepare(phi, alpha, dist)?;
    let worlds = severe_worlds(&phi_m, &alpha_m, dist);
    let closed = log2_ratio(&dist.prob_of_worlds(&worlds), &dist.prob_of_worlds(&phi_m));
    loss_report(OperatorTag::SevereWithdrawal, phi, worlds, dist, closed)
}

/// Expansion φ + α = φ ∧ α.
pub fn expand(phi: &Formula, alpha: &Formula) -> Formula {
    phi.clone().and(alpha.clone())
}

/// Expansion with its information gain G = −log2 P(α | φ).
pub fn expand_report(phi: &Formula, alpha: &Formula, dist: &ProbDist) -> Result<ChangeReport> {
    let (phi_m, alpha_m) = prepare(phi, alpha, dist)?;
    let expanded = expand(phi, alpha);
    let worlds = dist.possible(&phi_m.intersection(&alpha_m));
    let measure = km_diff(kappa_s(&expanded, dist)?, kappa_s(phi, dist)?);
    let closed = match dist.conditional(alpha, phi)? {
        Some(p) if !p.is_zero() => -log2_rational(&p),
        _ => f64::INFINITY,
    };
    Ok(ChangeReport { result: expanded, ..ChangeReport::new(OperatorTag::Expansion, worlds, dist, MeasureKind::Gain, measure, closed) })
}

fn revision_report(
    operator: OperatorTag,
    phi: &Formula,
    alpha: &Formula,
    worlds: WorldSet,
    dist: &ProbDist,
) -> Result<ChangeReport> {
    let phi_m = phi.models(dist.alphabet())?;
    let alpha_m = alpha.models(dist.alphabet())?;
    let result = formula_of_worlds(&worlds, dist.alphabet());
    let measure = km_diff(kappa_s(&result, dist)?, kappa_s(phi, dist)?);
    let p_phi = dist.prob_of_worlds(&phi_m);
    let closed = if dist.possible(&phi_m).is_disjoint(&alpha_m) {
        let p_min = dist.prob_of_worlds(&min_kappa(&dist.possible(&alpha_m), dist));
        if p_min.is_zero() {
            f64::INFINITY
        } else {
            log2_rational(&(p_phi / p_min))
        }
    } else {
        match dist.conditional(alpha, phi)? {
            Some(p) if !p.is_zero() => -log2_rational(&p),
            _ => f64::INFINITY,
        }
    };
    Ok(ChangeReport::new(operator, worlds, dist, MeasureKind::Change, measure, closed))
}

/// KM-revision φ ★ α, with information change R. Revising by a
/// P-unsatisfiable α yields ⊥ with R = +∞.
pub fn revise(phi: &Formula, alpha: &Formula, dist: &ProbDist) -> Result<ChangeReport> {
    let (phi_m, alpha_m) = prepare(phi, alpha, dist)?;
    let worlds = revise_worlds(&phi_m, &alpha_m, dist);
    revision_report(OperatorTag::Revision, phi, alpha, worlds, dist)
}

/// Revision evaluated through the Levi identity (φ ÷ ¬α) ∧ α.
pub fn revise_levi(phi: &Formula, alpha: &Formula, dist: &ProbDist) -> Result<ChangeReport> {
    let (phi_m, alpha_m) = prepare(phi, alpha, dist)?;
    let worlds = levi_revise_worlds(&phi_m, &alpha_m, dist);
    revision_report(OperatorTag::LeviRevision, phi, alpha, worlds, dist)
}
