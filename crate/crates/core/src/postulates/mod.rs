//! Executable rationality postulates for contraction, severe withdrawal,
//! revision and iterated revision, plus a randomized search harness.
//!
//! Every relation is evaluated exactly on possible-world sets; a violation
//! carries a [`Witness`] that serializes and replays to the same failure.

mod fuzz;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::change::{contract_worlds, full_meet_worlds, levi_revise_worlds, revise_worlds, severe_worlds};
use crate::error::{Error, Result};
use crate::logic::{formula_of_worlds, parse, Formula, WorldSet};
use crate::prob::ProbDist;

pub use fuzz::{exhaustive, fuzz, grid_distributions, FuzzConfig};

/// A belief change operator acting on possible-world sets.
pub trait ChangeOperator {
    fn name(&self) -> &str;
    /// The new belief's worlds given the belief `phi` and input `alpha`
    /// (both as model sets).
    fn apply(&self, phi: &WorldSet, alpha: &WorldSet, dist: &ProbDist) -> WorldSet;
}

/// The built-in operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Operator {
    KmContraction,
    FullMeet,
    SevereWithdrawal,
    KmRevision,
    LeviRevision,
}

impl Operator {
    pub const ALL: [Operator; 5] = [
        Operator::KmContraction,
        Operator::FullMeet,
        Operator::SevereWithdrawal,
        Operator::KmRevision,
        Operator::LeviRevision,
    ];

    pub fn code(self) -> &'static str {
        match self {
            Operator::KmContraction => "km-contraction",
            Operator::FullMeet => "full-meet",
            Operator::SevereWithdrawal => "severe-withdrawal",
            Operator::KmRevision => "km-revision",
            Operator::LeviRevision => "levi-revision",
        }
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Operator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Operator::ALL
            .into_iter()
            .find(|o| o.code() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown operator `{s}`")))
    }
}

impl ChangeOperator for Operator {
    fn name(&self) -> &str {
        self.code()
    }

    fn apply(&self, phi: &WorldSet, alpha: &WorldSet, dist: &ProbDist) -> WorldSet {
        match self {
            Operator::KmContraction => contract_worlds(phi, alpha, dist),
            Operator::FullMeet => full_meet_worlds(phi, alpha, dist),
            Operator::SevereWithdrawal => severe_worlds(phi, alpha, dist),
            Operator::KmRevision => revise_worlds(phi, alpha, dist),
            Operator::LeviRevision => levi_revise_worlds(phi, alpha, dist),
        }
    }
}

/// Postulate families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Contraction,
    Severe,
    Revision,
    Iterated,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Contraction, Family::Severe, Family::Revision, Family::Iterated];

    pub fn code(self) -> &'static str {
        match self {
            Family::Contraction => "contraction",
            Family::Severe => "severe",
            Family::Revision => "revision",
            Family::Iterated => "iterated",
        }
    }

    pub fn postulates(self) -> &'static [Postulate] {
        use Postulate::*;
        match self {
            Family::Contraction => &[Contract1, Contract2, Contract3, Contract4, Contract5, Contract6, Contract7],
            Family::Severe => &[Severe1, Severe2, Severe3, Severe4, Severe6a, Severe7],
            Family::Revision => &[Revise1, Revise2, Revise3, Revise4, Revise5, Revise6, Revise7],
            Family::Iterated => &[C1, C2, C3, C4],
        }
    }

    /// The operator the family is normally checked against.
    pub fn default_operator(self) -> Operator {
        match self {
            Family::Contraction => Operator::KmContraction,
            Family::Severe => Operator::SevereWithdrawal,
            Family::Revision | Family::Iterated => Operator::KmRevision,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.code() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown postulate family `{s}`")))
    }
}

/// A single postulate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Postulate {
    #[serde(rename = "contract-1")]
    Contract1,
    #[serde(rename = "contract-2")]
    Contract2,
    #[serde(rename = "contract-3")]
    Contract3,
    #[serde(rename = "contract-4")]
    Contract4,
    #[serde(rename = "contract-5")]
    Contract5,
    #[serde(rename = "contract-6")]
    Contract6,
    #[serde(rename = "contract-7")]
    Contract7,
    #[serde(rename = "severe-1")]
    Severe1,
    #[serde(rename = "severe-2")]
    Severe2,
    #[serde(rename = "severe-3")]
    Severe3,
    #[serde(rename = "severe-4")]
    Severe4,
    #[serde(rename = "severe-6a")]
    Severe6a,
    #[serde(rename = "severe-7")]
    Severe7,
    #[serde(rename = "revise-1")]
    Revise1,
    #[serde(rename = "revise-2")]
    Revise2,
    #[serde(rename = "revise-3")]
    Revise3,
    #[serde(rename = "revise-4")]
    Revise4,
    #[serde(rename = "revise-5")]
    Revise5,
    #[serde(rename = "revise-6")]
    Revise6,
    #[serde(rename = "revise-7")]
    Revise7,
    C1,
    C2,
    C3,
    C4,
}

impl Postulate {
    pub fn family(self) -> Family {
        use Postulate::*;
        match self {
            Contract1 | Contract2 | Contract3 | Contract4 | Contract5 | Contract6 | Contract7 => Family::Contraction,
            Severe1 | Severe2 | Severe3 | Severe4 | Severe6a | Severe7 => Family::Severe,
            Revise1 | Revise2 | Revise3 | Revise4 | Revise5 | Revise6 | Revise7 => Family::Revision,
            C1 | C2 | C3 | C4 => Family::Iterated,
        }
    }

    /// Conventional label, e.g. `(÷5)` or `(C2)`.
    pub fn label(self) -> &'static str {
        use Postulate::*;
        match self {
            Contract1 => "(÷1)",
            Contract2 => "(÷2)",
            Contract3 => "(÷3)",
            Contract4 => "(÷4)",
            Contract5 => "(÷5)",
            Contract6 => "(÷6)",
            Contract7 => "(÷7)",
            Severe1 => "(⋇1)",
            Severe2 => "(⋇2)",
            Severe3 => "(⋇3)",
            Severe4 => "(⋇4)",
            Severe6a => "(⋇6a)",
            Severe7 => "(⋇7)",
            Revise1 => "(★1)",
            Revise2 => "(★2)",
            Revise3 => "(★3)",
            Revise4 => "(★4)",
            Revise5 => "(★5)",
            Revise6 => "(★6)",
            Revise7 => "(★7)",
            C1 => "(C1)",
            C2 => "(C2)",
            C3 => "(C3)",
            C4 => "(C4)",
        }
    }

    pub fn description(self) -> &'static str {
        use Postulate::*;
        match self {
            Contract1 | Severe1 | Revise1 => "inclusion",
            Contract2 | Severe2 | Revise2 => "vacuity",
            Contract3 | Severe3 | Revise3 => "success",
            Contract4 | Severe4 | Revise4 => "extensionality",
            Contract5 => "recovery",
            Contract6 => "conjunctive overlap",
            Contract7 | Severe7 => "conjunctive inclusion",
            Severe6a => "antitony",
            Revise5 => "consistency",
            Revise6 => "superexpansion",
            Revise7 => "subexpansion",
            C1 => "revising by a consequence of α forgets α",
            C2 => "revising by a contradiction of α forgets α",
            C3 => "α survives revisions that would yield it",
            C4 => "α stays possible under revisions that allow it",
        }
    }
}

impl fmt::Display for Postulate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Inputs of one postulate check. For the iterated family `beta` plays the
/// role of the second input ψ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub dist: ProbDist,
    pub phi: WorldSet,
    pub alpha: WorldSet,
    pub beta: WorldSet,
}

impl Instance {
    /// Builds an instance from formulas over the distribution's alphabet.
    pub fn from_formulas(dist: &ProbDist, phi: &Formula, alpha: &Formula, beta: &Formula) -> Result<Self> {
        let sigma = dist.alphabet();
        Ok(Instance { dist: dist.clone(), phi: phi.models(sigma)?, alpha: alpha.models(sigma)?, beta: beta.models(sigma)? })
    }
}

/// A serializable counterexample that replays to the same failure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub postulate: Postulate,
    pub operator: String,
    /// Distribution in the text file format.
    pub distribution: String,
    pub phi: String,
    pub alpha: String,
    pub beta: String,
    /// Which relation failed.
    pub detail: String,
}

impl Witness {
    fn new(postulate: Postulate, op: &dyn ChangeOperator, inst: &Instance, detail: String) -> Self {
        let sigma = inst.dist.alphabet();
        Witness {
            postulate,
            operator: op.name().to_string(),
            distribution: inst.dist.to_text(),
            phi: formula_of_worlds(&inst.phi, sigma).to_string(),
            alpha: formula_of_worlds(&inst.alpha, sigma).to_string(),
            beta: formula_of_worlds(&inst.beta, sigma).to_string(),
            detail,
        }
    }

    /// Reconstructs the instance from the serialized fields.
    pub fn instance(&self) -> Result<Instance> {
        let dist = ProbDist::from_text(&self.distribution)?;
        let sigma = dist.alphabet();
        let phi = parse(&self.phi, sigma)?;
        let alpha = parse(&self.alpha, sigma)?;
        let beta = parse(&self.beta, sigma)?;
        Instance::from_formulas(&dist, &phi, &alpha, &beta)
    }

    /// Re-runs the check with the named built-in operator.
    pub fn replay(&self) -> Result<Outcome> {
        let op: Operator = self.operator.parse()?;
        Ok(check(self.postulate, &op, &self.instance()?))
    }
}

/// Verdict of one postulate on one instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Holds,
    /// The postulate's antecedent is false, so nothing was tested.
    Vacuous,
    Violated(Box<Witness>),
}

impl Outcome {
    pub fn is_violated(&self) -> bool {
        matches!(self, Outcome::Violated(_))
    }
}

enum Eval {
    Holds,
    Vacuous,
    Violated(String),
}

fn require(cond: bool, detail: impl FnOnce() -> String) -> Eval {
    if cond {
        Eval::Holds
    } else {
        Eval::Violated(detail())
    }
}

/// The α' ≡_P α used for extensionality: α with its zero-mass worlds removed,
/// added, and toggled, plus β when β ≡_P α.
fn extensional_twins(inst: &Instance) -> Vec<WorldSet> {
    let zero = inst.dist.support().complement();
    let mut twins = vec![
        inst.alpha.difference(&zero),
        inst.alpha.union(&zero),
        inst.alpha.symmetric_difference(&zero),
    ];
    if inst.dist.worlds_p_equiv(&inst.alpha, &inst.beta) {
        twins.push(inst.beta.clone());
    }
    twins.retain(|t| t != &inst.alpha);
    twins.sort();
    twins.dedup();
    twins
}

fn extensionality(op: &dyn ChangeOperator, inst: &Instance) -> Eval {
    let d = &inst.dist;
    let twins = extensional_twins(inst);
    if twins.is_empty() {
        return Eval::Vacuous;
    }
    let base = op.apply(&inst.phi, &inst.alpha, d);
    for twin in twins {
        if !d.worlds_p_equiv(&base, &op.apply(&inst.phi, &twin, d)) {
            let sigma = d.alphabet();
            return Eval::Violated(format!(
                "α ≡_P {} but the results differ",
                formula_of_worlds(&twin, sigma)
            ));
        }
    }
    Eval::Holds
}

fn evaluate(postulate: Postulate, op: &dyn ChangeOperator, inst: &Instance) -> Eval {
    use Postulate::*;
    let d = &inst.dist;
    let n = inst.phi.letters();
    let (phi, alpha, beta) = (&inst.phi, &inst.alpha, &inst.beta);
    let top = WorldSet::full(n);
    let le = |a: &WorldSet, b: &WorldSet| d.worlds_p_entail(a, b);
    let eq = |a: &WorldSet, b: &WorldSet| d.worlds_p_equiv(a, b);
    let apply = |a: &WorldSet, b: &WorldSet| op.apply(a, b, d);
    let alpha_beta = alpha.intersection(beta);
    let phi_le_alpha = le(phi, alpha);
    let top_le_alpha = le(&top, alpha);

    match postulate {
        Contract1 | Severe1 => require(le(phi, &apply(phi, alpha)), || "φ ≰_P result".into()),
        Contract2 => {
            if phi_le_alpha {
                return Eval::Vacuous;
            }
            require(eq(&apply(phi, alpha), phi), || "φ ≰_P α but result ≢_P φ".into())
        }
        Severe2 => {
            if phi_le_alpha && !top_le_alpha {
                return Eval::Vacuous;
            }
            require(eq(&apply(phi, alpha), phi), || "vacuous case but result ≢_P φ".into())
        }
        Contract3 | Severe3 => {
            if top_le_alpha {
                return Eval::Vacuous;
            }
            require(!le(&apply(phi, alpha), alpha), || "⊤ ≰_P α but result ≤_P α".into())
        }
        Contract4 | Severe4 | Revise4 => extensionality(op, inst),
        Contract5 => {
            let result = apply(phi, alpha);
            require(le(&result.intersection(alpha), phi), || "result ∧ α ≰_P φ".into())
        }
        Contract6 => {
            let lhs = apply(phi, &alpha_beta);
            let rhs = apply(phi, alpha).union(&apply(phi, beta));
            require(le(&lhs, &rhs), || "φ÷(α∧β) ≰_P φ÷α ∨ φ÷β".into())
        }
        Contract7 | Severe7 => {
            let both = apply(phi, &alpha_beta);
            if le(&both, alpha) {
                return Eval::Vacuous;
            }
            require(le(&apply(phi, alpha), &both), || "φ÷(α∧β) ≰_P α but φ÷α ≰_P φ÷(α∧β)".into())
        }
        Severe6a => {
            if top_le_alpha {
                return Eval::Vacuous;
            }
            require(le(&apply(phi, &alpha_beta), &apply(phi, alpha)), || "φ÷(α∧β) ≰_P φ÷α".into())
        }
        Revise1 => require(le(&phi.intersection(alpha), &apply(phi, alpha)), || "φ ∧ α ≰_P result".into()),
        Revise2 => {
            if le(phi, &alpha.complement()) {
                return Eval::Vacuous;
            }
            require(eq(&apply(phi, alpha), &phi.intersection(alpha)), || "φ ≰_P ¬α but result ≢_P φ ∧ α".into())
        }
        Revise3 => require(le(&apply(phi, alpha), alpha), || "result ≰_P α".into()),
        Revise5 => {
            if !d.worlds_p_consistent(alpha) {
                return Eval::Vacuous;
            }
            require(d.worlds_p_consistent(&apply(phi, alpha)), || "α is P-consistent but the result is not".into())
        }
        Revise6 => {
            let lhs = apply(phi, alpha).intersection(beta);
            require(le(&lhs, &apply(phi, &alpha_beta)), || "(φ★α) ∧ β ≰_P φ★(α∧β)".into())
        }
        Revise7 => {
            let result = apply(phi, alpha);
            if le(&result, &beta.complement()) {
                return Eval::Vacuous;
            }
            require(le(&apply(phi, &alpha_beta), &result.intersection(beta)), || {
                "φ★α ≰_P ¬β but φ★(α∧β) ≰_P (φ★α) ∧ β".into()
            })
        }
        C1 | C2 | C3 | C4 => {
            let psi = beta;
            let first = apply(phi, alpha);
            if !d.worlds_p_consistent(&first) {
                return Eval::Vacuous;
            }
            let twice = apply(&first, psi);
            let once = apply(phi, psi);
            let not_alpha = alpha.complement();
            match postulate {
                C1 if le(psi, alpha) => require(eq(&twice, &once), || "ψ ≤_P α but (φ★α)★ψ ≢_P φ★ψ".into()),
                C2 if le(psi, &not_alpha) => {
                    require(eq(&twice, &once), || "ψ ≤_P ¬α but (φ★α)★ψ ≢_P φ★ψ".into())
                }
                C3 if le(&once, alpha) => require(le(&twice, alpha), || "φ★ψ ≤_P α but (φ★α)★ψ ≰_P α".into()),
                C4 if !le(&once, &not_alpha) => {
                    require(!le(&twice, &not_alpha), || "φ★ψ ≰_P ¬α but (φ★α)★ψ ≤_P ¬α".into())
                }
                _ => Eval::Vacuous,
            }
        }
    }
}

/// Checks one postulate of `op` on one instance.
pub fn check(postulate: Postulate, op: &dyn ChangeOperator, inst: &Instance) -> Outcome {
    match evaluate(postulate, op, inst) {
        Eval::Holds => Outcome::Holds,
        Eval::Vacuous => Outcome::Vacuous,
        Eval::Violated(detail) => Outcome::Violated(Box::new(Witness::new(postulate, op, inst, detail))),
    }
}

/// Tally of one postulate over many instances, keeping the first witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub postulate: Postulate,
    pub label: &'static str,
    pub holds: usize,
    pub vacuous: usize,
    pub violated: usize,
    pub witness: Option<Witness>,
}

impl Verdict {
    fn new(postulate: Postulate) -> Self {
        Verdict { postulate, label: postulate.label(), holds: 0, vacuous: 0, violated: 0, witness: None }
    }

    pub fn passed(&self) -> bool {
        self.violated == 0
    }

    fn record(&mut self, outcome: Outcome) {
        match outcome {
            Outcome::Holds => self.holds += 1,
            Outcome::Vacuous => self.vacuous += 1,
            Outcome::Violated(w) => {
                self.violated += 1;
                self.witness.get_or_insert(*w);
            }
        }
    }
}

/// Per-postulate verdicts of one operator against one family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PostulateReport {
    pub family: Family,
    pub operator: String,
    pub cases: usize,
    pub verdicts: Vec<Verdict>,
}

impl PostulateReport {
    pub fn new(family: Family, op: &dyn ChangeOperator) -> Self {
        PostulateReport {
            family,
            operator: op.name().to_string(),
            cases: 0,
            verdicts: family.postulates().iter().map(|&p| Verdict::new(p)).collect(),
        }
    }

    /// Checks every postulate of the family on `inst` and records the outcomes.
    pub fn add(&mut self, op: &dyn ChangeOperator, inst: &Instance) {
        self.cases += 1;
        for v in &mut self.verdicts {
            v.record(check(v.postulate, op, inst));
        }
    }

    pub fn verdict(&self, postulate: Postulate) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.postulate == postulate)
    }

    pub fn all_passed(&self) -> bool {
        self.verdicts.iter().all(Verdict::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Verdict> {
        self.verdicts.iter().filter(|v| !v.passed())
    }
}

fn single(
    family: Family,
    op: &dyn ChangeOperator,
    phi: &Formula,
    alpha: &Formula,
    beta: &Formula,
    dist: &ProbDist,
) -> Result<PostulateReport> {
    let inst = Instance::from_formulas(dist, phi, alpha, beta)?;
    if !dist.worlds_p_consistent(&inst.phi) {
        return Err(Error::PInconsistent);
    }
    let mut report = PostulateReport::new(family, op);
    report.add(op, &inst);
    Ok(report)
}

/// (÷1)–(÷7) on one instance.
pub fn check_contraction(
    op: &dyn ChangeOperator,
    phi: &Formula,
    alpha: &Formula,
    beta: &Formula,
    dist: &ProbDist,
) -> Result<PostulateReport> {
    single(Family::Contraction, op, phi, alpha, beta, dist)
}

/// (⋇1)–(⋇4), (⋇6a), (⋇7) on one instance.
pub fn check_severe(
    op: &dyn ChangeOperator,
    phi: &Formula,
    alpha: &Formula,
    beta: &Formula,
    dist: &ProbDist,
) -> Result<PostulateReport> {
    single(Family::Severe, op, phi, alpha, beta, dist)
}

/// (★1)–(★7) on one instance.
pub fn check_revision(
    op: &dyn ChangeOperator,
    phi: &Formula,
    alpha: &Formula,
    beta: &Formula,
    dist: &ProbDist,
) -> Result<PostulateReport> {
    single(Family::Revision, op, phi, alpha, beta, dist)
}

/// (C1)–(C4) on the double revision (φ★α)★ψ.
pub fn check_iterated(
    op: &dyn ChangeOperator,
    phi: &Formula,
    alpha: &Formula,
    psi: &Formula,
    dist: &ProbDist,
) -> Result<PostulateReport> {
    single(Family::Iterated, op, phi, alpha, psi, dist)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for op in Operator::ALL {
            assert_eq!(op.code().parse::<Operator>().unwrap(), op);
        }
        for f in Family::ALL {
            assert_eq!(f.code().parse::<Family>().unwrap(), f);
            for p in f.postulates() {
                assert_eq!(p.family(), f);
                let json = serde_json::to_string(p).unwrap();
                assert_eq!(&serde_json::from_str::<Postulate>(&json).unwrap(), p);
            }
        }
        assert!("nope".parse::<Family>().is_err());
    }
}
