//! Exact probability distributions over worlds and the P-entailment relations.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logic::{formula_of_worlds, restrict_world, Alphabet, Formula, World, WorldSet};

pub type Rational = BigRational;

/// Parses an exact rational from `3/20`, `0.15`, `7`, or `-1.5`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::InvalidRational(text.to_string());
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (negative, digits) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    let all_digits = |p: &str| p.chars().all(|c| c.is_ascii_digit());
    if (int_part.is_empty() && frac_part.is_empty()) || !all_digits(int_part) || !all_digits(frac_part) {
        return Err(bad());
    }
    let numer: BigInt = format!("0{int_part}{frac_part}").parse().map_err(|_| bad())?;
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    let value = Rational::new(numer, denom);
    Ok(if negative { -value } else { value })
}

/// Exact decimal expansion of `r`, or `None` when it does not terminate.
pub fn exact_decimal(r: &Rational) -> Option<String> {
    let mut d = r.denom().clone();
    let (mut twos, mut fives) = (0usize, 0usize);
    let (two, five) = (BigInt::from(2), BigInt::from(5));
    while (&d % &two).is_zero() {
        d /= &two;
        twos += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        fives += 1;
    }
    if !d.is_one() {
        return None;
    }
    let places = twos.max(fives);
    let scaled = r * Rational::from_integer(num_traits::pow(BigInt::from(10), places));
    let digits = scaled.to_integer().abs().to_string();
    let sign = if r.is_negative() { "-" } else { "" };
    if places == 0 {
        return Some(format!("{sign}{digits}"));
    }
    let padded = format!("{digits:0>width$}", width = places + 1);
    let (int, frac) = padded.split_at(padded.len() - places);
    Some(format!("{sign}{int}.{frac}"))
}

/// A probability distribution over all worlds of an alphabet. Masses are
/// exact, nonnegative and sum to exactly one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbDist {
    alphabet: Alphabet,
    masses: Vec<Rational>,
    // Worlds of non-zero mass, derived from `masses`.
    support: WorldSet,
    // Per-world position of its mass among the distinct masses in increasing
    // order, so exact mass comparisons reduce to integer comparisons.
    mass_order: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct DistJson {
    alphabet: Vec<String>,
    masses: BTreeMap<String, String>,
}

impl ProbDist {
    /// Builds a distribution from one mass per world, in world-index order.
    pub fn new(alphabet: Alphabet, masses: Vec<Rational>) -> Result<Self> {
        if masses.len() != alphabet.world_count() {
            return Err(Error::WrongWorldCount { expected: alphabet.world_count(), got: masses.len() });
        }
        for (i, m) in masses.iter().enumerate() {
            if m.is_negative() {
                let world = alphabet.world_bits(World::from_index(i as u32));
                return Err(Error::NegativeMass { world, mass: m.to_string() });
            }
        }
        let total: Rational = masses.iter().sum();
        if !total.is_one() {
            return Err(Error::MassSum(total.to_string()));
        }
        Ok(ProbDist::assemble(alphabet, masses))
    }

    fn assemble(alphabet: Alphabet, masses: Vec<Rational>) -> Self {
        let support = WorldSet::from_worlds(
            alphabet.len(),
            alphabet.worlds().filter(|w| !masses[w.index() as usize].is_zero()),
        );
        let mut distinct: Vec<&Rational> = masses.iter().collect();
        distinct.sort_unstable();
        distinct.dedup();
        let mass_order = masses
            .iter()
            .map(|m| distinct.binary_search(&m).expect("mass is among the distinct masses") as u32)
            .collect();
        ProbDist { alphabet, masses, support, mass_order }
    }

    /// Builds a distribution from explicit entries; unlisted worlds get mass 0.
    pub fn from_entries(alphabet: Alphabet, entries: impl IntoIterator<Item = (World, Rational)>) -> Result<Self> {
        let mut masses: Vec<Option<Rational>> = vec![None; alphabet.world_count()];
        for (w, m) in entries {
            let slot = masses
                .get_mut(w.index() as usize)
                .ok_or_else(|| Error::InvalidWorld(w.index().to_string()))?;
            if slot.is_some() {
                return Err(Error::DuplicateWorld(alphabet.world_bits(w)));
            }
            *slot = Some(m);
        }
        Self::new(alphabet, masses.into_iter().map(|m| m.unwrap_or_else(Rational::zero)).collect())
    }

    /// Convenience constructor from `(bitstring, rational-text)` pairs.
    pub fn from_strs(alphabet: &str, entries: &[(&str, &str)]) -> Result<Self> {
        let alphabet = Alphabet::parse(alphabet)?;
        let parsed = entries
            .iter()
            .map(|(w, m)| Ok((alphabet.parse_world(w)?, parse_rational(m)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_entries(alphabet, parsed)
    }

    pub fn uniform(alphabet: Alphabet) -> Self {
        let n = alphabet.world_count();
        let each = Rational::new(BigInt::one(), BigInt::from(n));
        ProbDist::assemble(alphabet, vec![each; n])
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn letters(&self) -> usize {
        self.alphabet.len()
    }

    pub fn mass(&self, w: World) -> &Rational {
        &self.masses[w.index() as usize]
    }

    pub fn masses(&self) -> &[Rational] {
        &self.masses
    }

    /// Worlds of non-zero mass.
    pub fn support(&self) -> WorldSet {
        self.support.clone()
    }

    /// Restricts `worlds` to those of non-zero mass.
    pub fn possible(&self, worlds: &WorldSet) -> WorldSet {
        worlds.intersection(&self.support)
    }

    pub fn prob_of_worlds(&self, worlds: &WorldSet) -> Rational {
        worlds.iter().map(|w| self.mass(w)).sum()
    }

    /// P(φ): total mass of the models of `phi`.
    pub fn prob(&self, phi: &Formula) -> Result<Rational> {
        Ok(self.prob_of_worlds(&phi.models(&self.alphabet)?))
    }

    /// Conditional probability P(α | φ); `None` when P(φ) = 0.
    pub fn conditional(&self, alpha: &Formula, phi: &Formula) -> Result<Option<Rational>> {
        let p_phi = self.prob(phi)?;
        if p_phi.is_zero() {
            return Ok(None);
        }
        let both = phi.models(&self.alphabet)?.intersection(&alpha.models(&self.alphabet)?);
        Ok(Some(self.prob_of_worlds(&both) / p_phi))
    }

    /// [φ]⁺: the models of `phi` with non-zero mass.
    pub fn possible_models(&self, phi: &Formula) -> Result<WorldSet> {
        Ok(self.possible(&phi.models(&self.alphabet)?))
    }

    /// The disjunction of all zero-mass worlds (⊥ when the support is full).
    pub fn p_zero_formula(&self) -> Formula {
        formula_of_worlds(&self.support().complement(), &self.alphabet)
    }

    /// Largest mass among the possible worlds of `worlds`, if any.
    pub fn max_mass(&self, worlds: &WorldSet) -> Option<&Rational> {
        self.heaviest(worlds).map(|w| self.mass(w))
    }

    /// A possible world of maximal mass in `worlds`, if any.
    fn heaviest(&self, worlds: &WorldSet) -> Option<World> {
        worlds.intersection(&self.support).iter().max_by_key(|w| self.mass_order[w.index() as usize])
    }

    /// The possible worlds of `worlds` with maximal mass, all ties included.
    pub fn heaviest_worlds(&self, worlds: &WorldSet) -> WorldSet {
        let possible = worlds.intersection(&self.support);
        let Some(top) = self.heaviest(&possible).map(|w| self.mass_order[w.index() as usize]) else {
            return possible;
        };
        WorldSet::from_worlds(possible.letters(), possible.iter().filter(|w| self.mass_order[w.index() as usize] == top))
    }

    /// The possible worlds of `candidates` whose mass is at least that of `reference`.
    pub fn at_least_as_heavy(&self, candidates: &WorldSet, reference: World) -> WorldSet {
        let top = self.mass_order[reference.index() as usize];
        WorldSet::from_worlds(
            candidates.letters(),
            candidates.intersection(&self.support).iter().filter(|w| self.mass_order[w.index() as usize] >= top),
        )
    }

    // World-set versions of the P-relations; the formula versions delegate here.

    pub fn worlds_p_entail(&self, a: &WorldSet, b: &WorldSet) -> bool {
        a.intersection(&self.support).is_subset(b)
    }

    pub fn worlds_p_equiv(&self, a: &WorldSet, b: &WorldSet) -> bool {
        self.possible(a) == self.possible(b)
    }

    pub fn worlds_p_consistent(&self, a: &WorldSet) -> bool {
        !a.is_disjoint(&self.support)
    }

    /// φ ≤_P ψ: every possible model of φ is a model of ψ.
    pub fn p_entails(&self, phi: &Formula, psi: &Formula) -> Result<bool> {
        Ok(self.worlds_p_entail(&phi.models(&self.alphabet)?, &psi.models(&self.alphabet)?))
    }

    /// φ <_P ψ: φ ≤_P ψ but not ψ ≤_P φ.
    pub fn p_strict(&self, phi: &Formula, psi: &Formula) -> Result<bool> {
        let (a, b) = (phi.models(&self.alphabet)?, psi.models(&self.alphabet)?);
        Ok(self.worlds_p_entail(&a, &b) && !self.worlds_p_entail(&b, &a))
    }

    pub fn p_equiv(&self, phi: &Formula, psi: &Formula) -> Result<bool> {
        Ok(self.worlds_p_equiv(&phi.models(&self.alphabet)?, &psi.models(&self.alphabet)?))
    }

    /// φ has at least one possible model.
    pub fn p_consistent(&self, phi: &Formula) -> Result<bool> {
        Ok(self.worlds_p_consistent(&phi.models(&self.alphabet)?))
    }

    /// Exact test P(φ ∧ ψ) = P(φ)·P(ψ).
    pub fn p_independent(&self, phi: &Formula, psi: &Formula) -> Result<bool> {
        let (a, b) = (phi.models(&self.alphabet)?, psi.models(&self.alphabet)?);
        Ok(self.prob_of_worlds(&a.intersection(&b)) == self.prob_of_worlds(&a) * self.prob_of_worlds(&b))
    }

    /// Extends to the super-alphabet `to`, splitting each world's mass
    /// uniformly over its extensions.
    pub fn extend(&self, to: &Alphabet) -> Result<ProbDist> {
        if !self.alphabet.is_subset_of(to) {
            return Err(Error::NotSubAlphabet { sub: self.alphabet.to_string(), sup: to.to_string() });
        }
        let share = Rational::new(BigInt::one(), BigInt::one() << (to.len() - self.letters()));
        let masses = to
            .worlds()
            .map(|w| Ok(self.mass(restrict_world(w, to, &self.alphabet)?) * &share))
            .collect::<Result<Vec<_>>>()?;
        Ok(ProbDist::assemble(to.clone(), masses))
    }

    /// Marginal distribution over the sub-alphabet `to`.
    pub fn marginalize(&self, to: &Alphabet) -> Result<ProbDist> {
        if !to.is_subset_of(&self.alphabet) {
            return Err(Error::NotSubAlphabet { sub: to.to_string(), sup: self.alphabet.to_string() });
        }
        let mut masses = vec![Rational::zero(); to.world_count()];
        for w in self.alphabet.worlds() {
            let small = restrict_world(w, &self.alphabet, to)?;
            masses[small.index() as usize] += self.mass(w);
        }
        Ok(ProbDist::assemble(to.clone(), masses))
    }

    /// Reads the text format: an alphabet line, then `<bitstring> <mass>` lines.
    /// Blank lines and `#` comments are ignored.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut alphabet: Option<Alphabet> = None;
        let mut entries = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at_line = |e: Error| Error::FileFormat { line: line_no, message: e.to_string() };
            let Some(sigma) = &alphabet else {
                alphabet = Some(Alphabet::parse(line).map_err(at_line)?);
                continue;
            };
            let mut parts = line.split_whitespace();
            let (Some(bits), Some(mass), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::FileFormat {
                    line: line_no,
                    message: "expected `<bitstring> <mass>`".into(),
                });
            };
            let w = sigma.parse_world(bits).map_err(at_line)?;
            entries.push((w, parse_rational(mass).map_err(at_line)?));
        }
        let alphabet = alphabet.ok_or(Error::FileFormat { line: 1, message: "missing alphabet line".into() })?;
        Self::from_entries(alphabet, entries)
    }

    /// Writes the text format, listing only worlds of non-zero mass.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.alphabet);
        for w in self.support().iter() {
            let _ = writeln!(out, "{} {}", self.alphabet.world_bits(w), self.mass(w));
        }
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: DistJson = serde_json::from_str(text)?;
        let alphabet = Alphabet::new(raw.alphabet)?;
        let entries = raw
            .masses
            .iter()
            .map(|(w, m)| Ok((alphabet.parse_world(w)?, parse_rational(m)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_entries(alphabet, entries)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let masses = self
            .support()
            .iter()
            .map(|w| (self.alphabet.world_bits(w), self.mass(w).to_string()))
            .collect();
        serde_json::to_value(DistJson { alphabet: self.alphabet.letters().to_vec(), masses })
            .expect("distribution serializes")
    }

    pub fn to_json(&self) -> String {
        self.to_json_value().to_string()
    }

    /// Parses either format, choosing JSON when the text starts with `{`.
    pub fn load(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_text(text)
        }
    }
}
