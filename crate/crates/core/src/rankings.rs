//! Faithful rankings, the distributions they induce, and ranked contraction.

use std::fmt::Write as _;

use num_bigint::BigInt;
use rand::Rng;

use crate::change::{contract_worlds, severe_worlds};
use crate::error::{Error, Result};
use crate::logic::{formula_of_worlds, Alphabet, Formula, World, WorldSet};
use crate::prob::{ProbDist, Rational};

/// A φ-faithful ranking: exactly the models of φ sit at rank 0 and the ranks
/// used form a contiguous range 0..=max.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaithfulRanking {
    phi: Formula,
    alphabet: Alphabet,
    ranks: Vec<u32>,
}

fn check_contiguous(ranks: &[u32]) -> Result<()> {
    let max = ranks.iter().copied().max().unwrap_or(0);
    for r in 0..=max {
        if !ranks.contains(&r) {
            return Err(Error::InvalidRanking(format!("no world has rank {r} (max rank is {max})")));
        }
    }
    Ok(())
}

impl FaithfulRanking {
    /// Validates `ranks` (one per world, in index order) against φ.
    pub fn new(phi: Formula, alphabet: Alphabet, ranks: Vec<u32>) -> Result<Self> {
        if ranks.len() != alphabet.world_count() {
            return Err(Error::WrongWorldCount { expected: alphabet.world_count(), got: ranks.len() });
        }
        let models = phi.models(&alphabet)?;
        if models.is_empty() {
            return Err(Error::NotFaithful("the belief is unsatisfiable".into()));
        }
        check_contiguous(&ranks)?;
        let ranking = FaithfulRanking { phi, alphabet, ranks };
        if ranking.level(0) != models {
            return Err(Error::NotFaithful("rank-0 worlds differ from the models of the belief".into()));
        }
        Ok(ranking)
    }

    /// Ranking faithful to the formula of its own rank-0 worlds.
    pub fn from_ranks(alphabet: Alphabet, ranks: Vec<u32>) -> Result<Self> {
        if ranks.len() != alphabet.world_count() {
            return Err(Error::WrongWorldCount { expected: alphabet.world_count(), got: ranks.len() });
        }
        check_contiguous(&ranks)?;
        let zero = WorldSet::from_worlds(
            alphabet.len(),
            alphabet.worlds().filter(|w| ranks[w.index() as usize] == 0),
        );
        let phi = formula_of_worlds(&zero, &alphabet);
        Self::new(phi, alphabet, ranks)
    }

    /// Reads a ranking file: an alphabet line, then one `<bitstring> <rank>`
    /// line for every world. Blank lines and `#` comments are ignored.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut alphabet: Option<Alphabet> = None;
        let mut ranks: Vec<Option<u32>> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at_line = |message: String| Error::FileFormat { line: line_no, message };
            let Some(sigma) = &alphabet else {
                let sigma = Alphabet::parse(line).map_err(|e| at_line(e.to_string()))?;
                ranks = vec![None; sigma.world_count()];
                alphabet = Some(sigma);
                continue;
            };
            let mut parts = line.split_whitespace();
            let (Some(bits), Some(rank), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(at_line("expected `<bitstring> <rank>`".into()));
            };
            let w = sigma.parse_world(bits).map_err(|e| at_line(e.to_string()))?;
            let rank: u32 = rank.parse().map_err(|_| at_line(format!("`{rank}` is not a natural number")))?;
            if ranks[w.index() as usize].replace(rank).is_some() {
                return Err(at_line(format!("world {bits} is listed twice")));
            }
        }
        let alphabet = alphabet.ok_or(Error::FileFormat { line: 1, message: "missing alphabet line".into() })?;
        let ranks = ranks
            .into_iter()
            .enumerate()
            .map(|(i, r)| {
                r.ok_or_else(|| {
                    Error::InvalidRanking(format!(
                        "world {} has no rank",
                        alphabet.world_bits(World::from_index(i as u32))
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_ranks(alphabet, ranks)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.alphabet);
        for w in self.alphabet.worlds() {
            let _ = writeln!(out, "{} {}", self.alphabet.world_bits(w), self.rank(w));
        }
        out
    }

    pub fn phi(&self) -> &Formula {
        &self.phi
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn rank(&self, w: World) -> u32 {
        self.ranks[w.index() as usize]
    }

    pub fn ranks(&self) -> &[u32] {
        &self.ranks
    }

    pub fn max_rank(&self) -> u32 {
        self.ranks.iter().copied().max().unwrap_or(0)
    }

    /// Worlds of rank exactly `r`.
    pub fn level(&self, r: u32) -> WorldSet {
        WorldSet::from_worlds(self.alphabet.len(), self.alphabet.worlds().filter(|&w| self.rank(w) == r))
    }

    /// Minimal rank among `worlds`, if non-empty.
    pub fn min_rank(&self, worlds: &WorldSet) -> Option<u32> {
        worlds.iter().map(|w| self.rank(w)).min()
    }

    /// min_r: the worlds of `worlds` with minimal rank.
    pub fn minimal(&self, worlds: &WorldSet) -> WorldSet {
        match self.min_rank(worlds) {
            Some(m) => WorldSet::from_worlds(worlds.letters(), worlds.iter().filter(|&w| self.rank(w) == m)),
            None => WorldSet::empty(worlds.letters()),
        }
    }

    /// A random faithful ranking over `alphabet` (φ is read off rank 0).
    pub fn random(alphabet: &Alphabet, rng: &mut impl Rng) -> Self {
        let n = alphabet.world_count();
        let raw: Vec<u32> = (0..n).map(|_| rng.gen_range(0..n as u32)).collect();
        Self::from_ranks(alphabet.clone(), compress(&raw)).expect("compressed ranks are contiguous")
    }
}

// Renumbers ranks to 0..k preserving their order.
fn compress(raw: &[u32]) -> Vec<u32> {
    let mut levels: Vec<u32> = raw.to_vec();
    levels.sort_unstable();
    levels.dedup();
    raw.iter().map(|r| levels.binary_search(r).expect("present") as u32).collect()
}

/// Every faithful ranking over `alphabet`, one per ordered partition of the
/// worlds. There are 75 for two letters; limited to at most two letters since
/// three already give 545 835.
pub fn all_rankings(alphabet: &Alphabet) -> Result<Vec<FaithfulRanking>> {
    const MAX: usize = 2;
    if alphabet.len() > MAX {
        return Err(Error::ExhaustiveCap { operation: "ranking enumeration", letters: alphabet.len(), max: MAX });
    }
    let n = alphabet.world_count();
    let mut out = Vec::new();
    let mut ranks = vec![0u32; n];
    // Enumerate all maps worlds → 0..n and keep the contiguous ones.
    loop {
        if check_contiguous(&ranks).is_ok() {
            out.push(FaithfulRanking::from_ranks(alphabet.clone(), ranks.clone())?);
        }
        let mut i = 0;
        loop {
            if i == n {
                return Ok(out);
            }
            ranks[i] += 1;
            if (ranks[i] as usize) < n {
                break;
            }
            ranks[i] = 0;
            i += 1;
        }
    }
}

/// Ranking induced by a total preorder `le` (w ≤ w' meaning w is at least as
/// plausible) via iterated minima. Fails when `le` is not a total preorder or
/// is not faithful to φ.
pub fn ranking_from_preorder(
    phi: &Formula,
    alphabet: &Alphabet,
    le: impl Fn(World, World) -> bool,
) -> Result<FaithfulRanking> {
    let worlds: Vec<World> = alphabet.worlds().collect();
    let mut ranks = vec![u32::MAX; worlds.len()];
    let mut remaining = worlds.clone();
    let mut level = 0;
    while !remaining.is_empty() {
        let minima: Vec<World> =
            remaining.iter().copied().filter(|&w| remaining.iter().all(|&v| le(w, v))).collect();
        if minima.is_empty() {
            return Err(Error::NotPreorder("some level has no minimal world".into()));
        }
        for w in &minima {
            ranks[w.index() as usize] = level;
        }
        remaining.retain(|w| !minima.contains(w));
        level += 1;
    }
    for &w in &worlds {
        for &v in &worlds {
            if le(w, v) != (ranks[w.index() as usize] <= ranks[v.index() as usize]) {
                return Err(Error::NotPreorder(format!(
                    "comparison of {} and {} is inconsistent with a total preorder",
                    alphabet.world_bits(w),
                    alphabet.world_bits(v)
                )));
            }
        }
    }
    FaithfulRanking::new(phi.clone(), alphabet.clone(), ranks)
}

/// An r-faithful distribution: mass(w) ∝ m − r(w) with m = 1 + max rank.
pub fn dist_from_ranking(r: &FaithfulRanking) -> ProbDist {
    let m = r.max_rank() as i64 + 1;
    let weights: Vec<i64> = r.ranks().iter().map(|&k| m - k as i64).collect();
    let total: i64 = weights.iter().sum();
    let masses = weights.into_iter().map(|w| Rational::new(BigInt::from(w), BigInt::from(total))).collect();
    ProbDist::new(r.alphabet().clone(), masses).expect("weights are positive and normalised")
}

/// Ranked contraction on worlds: [φ] ∪ min_r([¬α]).
pub fn ranked_contract_worlds(r: &FaithfulRanking, alpha: &WorldSet) -> WorldSet {
    r.level(0).union(&r.minimal(&alpha.complement()))
}

/// Ranked severe withdrawal on worlds: every world no less plausible than
/// the most plausible ¬α-world; [φ] when α is a tautology.
pub fn ranked_severe_worlds(r: &FaithfulRanking, alpha: &WorldSet) -> WorldSet {
    match r.min_rank(&alpha.complement()) {
        Some(m) => WorldSet::from_worlds(alpha.letters(), r.alphabet().worlds().filter(|&w| r.rank(w) <= m)),
        None => r.level(0),
    }
}

fn check_phi(phi: &Formula, r: &FaithfulRanking) -> Result<()> {
    if phi.models(r.alphabet())? != r.level(0) {
        return Err(Error::NotFaithful("ranking is centred on a different belief".into()));
    }
    Ok(())
}

/// φ ÷_r α = [φ] ∪ min_r([¬α]) as a formula.
pub fn ranked_contract(phi: &Formula, alpha: &Formula, r: &FaithfulRanking) -> Result<Formula> {
    check_phi(phi, r)?;
    let worlds = ranked_contract_worlds(r, &alpha.models(r.alphabet())?);
    Ok(formula_of_worlds(&worlds, r.alphabet()))
}

/// A disagreement between a ranked operator and its KM counterpart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discrepancy {
    pub operator: &'static str,
    pub alpha: Formula,
    pub ranked: WorldSet,
    pub km: WorldSet,
}

/// Outcome of comparing ranked and KM operators on a list of inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepresentationReport {
    pub checked: usize,
    pub discrepancies: Vec<Discrepancy>,
}

impl RepresentationReport {
    pub fn is_clean(&self) -> bool {
        self.discrepancies.is_empty()
    }
}

/// Compares ranked contraction and ranked severe withdrawal with KM
/// contraction and KM severe withdrawal under `dist_from_ranking(r)`.
pub fn representation_check(phi: &Formula, r: &FaithfulRanking, alphas: &[Formula]) -> Result<RepresentationReport> {
    check_phi(phi, r)?;
    let dist = dist_from_ranking(r);
    let phi_m = r.level(0);
    let mut report = RepresentationReport { checked: 0, discrepancies: Vec::new() };
    for alpha in alphas {
        let alpha_m = alpha.models(r.alphabet())?;
        let pairs = [
            ("contraction", ranked_contract_worlds(r, &alpha_m), contract_worlds(&phi_m, &alpha_m, &dist)),
            ("severe withdrawal", ranked_severe_worlds(r, &alpha_m), severe_worlds(&phi_m, &alpha_m, &dist)),
        ];
        for (operator, ranked, km) in pairs {
            report.checked += 1;
            if !dist.worlds_p_equiv(&ranked, &km) {
                report.discrepancies.push(Discrepancy { operator, alpha: alpha.clone(), ranked, km });
            }
        }
    }
    Ok(report)
}
