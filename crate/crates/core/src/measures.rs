//! Knowledge measures: the Shannon measure κ_S and its base-b family, the
//! uniform measure κ_h, and s-entailment via letter substitutions.

use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::logic::{Alphabet, Formula, World, WorldSet};
use crate::prob::{ProbDist, Rational};

/// Largest alphabet for which s-entailment is searched exhaustively.
pub const S_ENTAILMENT_MAX_LETTERS: usize = 8;

/// A value of a knowledge measure: a nonnegative real or +∞.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub enum KmValue {
    Finite(f64),
    Infinite,
}

impl KmValue {
    pub fn is_infinite(self) -> bool {
        self == KmValue::Infinite
    }

    /// The value as an extended real (`f64::INFINITY` for +∞).
    pub fn to_f64(self) -> f64 {
        match self {
            KmValue::Finite(v) => v,
            KmValue::Infinite => f64::INFINITY,
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            KmValue::Finite(v) => Some(v),
            KmValue::Infinite => None,
        }
    }
}

impl fmt::Display for KmValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KmValue::Finite(v) => match f.precision() {
                Some(p) => write!(f, "{v:.p$}"),
                None => write!(f, "{v}"),
            },
            KmValue::Infinite => f.write_str("inf"),
        }
    }
}

fn log2_int(n: &BigInt) -> f64 {
    // Shift very large integers into f64 range before taking the logarithm.
    let bits = n.bits();
    if bits <= 1000 {
        n.to_f64().expect("fits in f64").log2()
    } else {
        let shift = bits - 64;
        (n >> shift).to_f64().expect("fits in f64").log2() + shift as f64
    }
}

/// log2 of a positive rational, computed from numerator and denominator
/// separately so tiny probabilities keep full precision.
pub fn log2_rational(r: &Rational) -> f64 {
    assert!(r > &Rational::zero(), "log2 of a non-positive number");
    if r.is_one() {
        return 0.0;
    }
    log2_int(r.numer()) - log2_int(r.denom())
}

/// −log2 p, +∞ for p = 0.
pub fn surprise(p: &Rational) -> KmValue {
    if p.is_zero() {
        KmValue::Infinite
    } else if p.is_one() {
        KmValue::Finite(0.0)
    } else {
        KmValue::Finite(-log2_rational(p))
    }
}

/// Shannon knowledge measure κ_S(φ) = −log2 P(φ).
pub fn kappa_s(phi: &Formula, dist: &ProbDist) -> Result<KmValue> {
    Ok(surprise(&dist.prob(phi)?))
}

/// κ_S of a set of worlds.
pub fn kappa_s_worlds(worlds: &WorldSet, dist: &ProbDist) -> KmValue {
    surprise(&dist.prob_of_worlds(worlds))
}

/// The Shannon measure in an arbitrary logarithm base b > 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KnowledgeMeasure {
    base: f64,
}

impl Default for KnowledgeMeasure {
    fn default() -> Self {
        KnowledgeMeasure { base: 2.0 }
    }
}

impl KnowledgeMeasure {
    pub fn new(base: f64) -> Result<Self> {
        if !base.is_finite() || base <= 1.0 {
            return Err(Error::InvalidBase(base.to_string()));
        }
        Ok(KnowledgeMeasure { base })
    }

    pub fn base(&self) -> f64 {
        self.base
    }

    /// −log_b p.
    pub fn of_prob(&self, p: &Rational) -> KmValue {
        match surprise(p) {
            KmValue::Finite(v) if self.base == 2.0 => KmValue::Finite(v),
            KmValue::Finite(v) => KmValue::Finite(v / self.base.log2()),
            KmValue::Infinite => KmValue::Infinite,
        }
    }

    pub fn measure(&self, phi: &Formula, dist: &ProbDist) -> Result<KmValue> {
        Ok(self.of_prob(&dist.prob(phi)?))
    }
}

/// κ_S in base `base`: κ_S(φ) / log2(b).
pub fn kappa_b(phi: &Formula, dist: &ProbDist, base: f64) -> Result<KmValue> {
    KnowledgeMeasure::new(base)?.measure(phi, dist)
}

/// Uniform knowledge measure κ_h(φ) = |Σ_φ| − log2 |[φ]_{Σ_φ}|, computed over
/// the formula's own letters.
pub fn kappa_h(phi: &Formula) -> KmValue {
    let Some(own) = phi.own_alphabet().expect("letters of a formula form an alphabet") else {
        return match phi {
            Formula::Bottom => KmValue::Infinite,
            _ => KmValue::Finite(0.0),
        };
    };
    let count = phi.models(&own).expect("own alphabet covers the formula").len();
    if count == 0 {
        return KmValue::Infinite;
    }
    let v = own.len() as f64 - (count as f64).log2();
    KmValue::Finite(if v == 0.0 { 0.0 } else { v })
}

/// A bijective renaming of letters to literals: letter `i` is replaced by
/// letter `target[i].0`, negated when `target[i].1` is true.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Substitution {
    targets: Vec<(usize, bool)>,
}

impl Substitution {
    pub fn new(targets: Vec<(usize, bool)>) -> Result<Self> {
        let n = targets.len();
        let mut seen = vec![false; n];
        for &(j, _) in &targets {
            if j >= n {
                return Err(Error::InvalidSubstitution(format!("target letter index {j} out of range")));
            }
            if std::mem::replace(&mut seen[j], true) {
                return Err(Error::InvalidSubstitution(format!("letter index {j} is targeted twice")));
            }
        }
        Ok(Substitution { targets })
    }

    pub fn identity(letters: usize) -> Self {
        Substitution { targets: (0..letters).map(|i| (i, false)).collect() }
    }

    /// Parses `p/~q, q/p` over `alphabet`; every letter must appear exactly
    /// once on each side.
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Self> {
        let bad = |m: String| Error::InvalidSubstitution(m);
        let mut targets: Vec<Option<(usize, bool)>> = vec![None; alphabet.len()];
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (from, to) = item.split_once('/').ok_or_else(|| bad(format!("`{item}` is not `letter/literal`")))?;
            let from = alphabet.index_of(from.trim()).ok_or_else(|| bad(format!("unknown letter in `{item}`")))?;
            let to = to.trim();
            let (negated, name) = match to.strip_prefix('~') {
                Some(rest) => (true, rest.trim()),
                None => (false, to),
            };
            let to = alphabet.index_of(name).ok_or_else(|| bad(format!("unknown letter in `{item}`")))?;
            if targets[from].replace((to, negated)).is_some() {
                return Err(bad(format!("letter `{}` substituted twice", alphabet.letter(from))));
            }
        }
        let targets = targets
            .into_iter()
            .enumerate()
            .map(|(i, t)| t.ok_or_else(|| bad(format!("letter `{}` not substituted", alphabet.letter(i)))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(targets)
    }

    pub fn letters(&self) -> usize {
        self.targets.len()
    }

    /// wθ: bit `target[i].0` of the result is bit `i` of `w`, flipped when negated.
    pub fn apply(&self, w: World) -> World {
        self.targets
            .iter()
            .enumerate()
            .fold(World::from_index(0), |acc, (i, &(j, neg))| acc.with_bit(j, w.bit(i) ^ neg))
    }

    /// All n!·2^n substitutions over `letters` letters.
    pub fn all(letters: usize) -> impl Iterator<Item = Substitution> {
        (0..letters).permutations(letters).flat_map(move |perm| {
            (0u32..(1 << letters)).map(move |signs| Substitution {
                targets: perm.iter().enumerate().map(|(i, &j)| (j, (signs >> i) & 1 == 1)).collect(),
            })
        })
    }
}

/// Wθ = {wθ | w ∈ W}.
pub fn world_substitute(worlds: &WorldSet, theta: &Substitution) -> Result<WorldSet> {
    if theta.letters() != worlds.letters() {
        return Err(Error::InvalidSubstitution(format!(
            "substitution covers {} letters, world set has {}",
            theta.letters(),
            worlds.letters()
        )));
    }
    Ok(WorldSet::from_worlds(worlds.letters(), worlds.iter().map(|w| theta.apply(w))))
}

fn worlds_s_entail(a: &WorldSet, b: &WorldSet) -> Result<bool> {
    let n = a.letters();
    if n > S_ENTAILMENT_MAX_LETTERS {
        return Err(Error::ExhaustiveCap { operation: "s-entailment", letters: n, max: S_ENTAILMENT_MAX_LETTERS });
    }
    if a.len() > b.len() {
        return Ok(false);
    }
    if a.is_subset(b) {
        return Ok(true);
    }
    Ok(Substitution::all(n).any(|theta| a.iter().all(|w| b.contains(theta.apply(w)))))
}

/// φ ≤_s ψ: some substitution θ has [φ]θ ⊆ [ψ].
pub fn s_entails(phi: &Formula, psi: &Formula, alphabet: &Alphabet) -> Result<bool> {
    worlds_s_entail(&phi.models(alphabet)?, &psi.models(alphabet)?)
}

pub fn s_strict(phi: &Formula, psi: &Formula, alphabet: &Alphabet) -> Result<bool> {
    Ok(s_entails(phi, psi, alphabet)? && !s_entails(psi, phi, alphabet)?)
}

pub fn s_equiv(phi: &Formula, psi: &Formula, alphabet: &Alphabet) -> Result<bool> {
    Ok(s_entails(phi, psi, alphabet)? && s_entails(psi, phi, alphabet)?)
}
