use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{check, ChangeOperator, Family, Instance, Operator, Outcome, Postulate, PostulateReport};
use crate::error::{Error, Result};
use crate::logic::{Alphabet, WorldSet};
use crate::prob::{ProbDist, Rational};

const LETTER_NAMES: [&str; 4] = ["p", "q", "r", "s"];
const MAX_FUZZ_LETTERS: usize = 4;
const MAX_EXHAUSTIVE_LETTERS: usize = 2;
/// Per-world integer weights are drawn from 0..=MAX_WEIGHT before normalising.
const MAX_WEIGHT: u32 = 4;

/// Parameters of a randomized postulate search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzConfig {
    pub family: Family,
    pub operator: Operator,
    pub letters: usize,
    pub cases: usize,
    pub seed: u64,
    pub shrink: bool,
}

impl FuzzConfig {
    pub fn new(family: Family, letters: usize, cases: usize, seed: u64) -> Self {
        FuzzConfig { family, operator: family.default_operator(), letters, cases, seed, shrink: true }
    }

    pub fn with_operator(mut self, operator: Operator) -> Self {
        self.operator = operator;
        self
    }
}

// A fuzz case kept in generator form so it can be shrunk.
#[derive(Debug, Clone)]
struct Case {
    weights: Vec<u32>,
    phi: u64,
    alpha: u64,
    beta: u64,
}

fn dist_from_weights(alphabet: &Alphabet, weights: &[u32]) -> Option<ProbDist> {
    let total: u32 = weights.iter().sum();
    if total == 0 {
        return None;
    }
    let masses = weights.iter().map(|&w| Rational::new(BigInt::from(w), BigInt::from(total))).collect();
    Some(ProbDist::new(alphabet.clone(), masses).expect("normalised weights"))
}

impl Case {
    fn instance(&self, alphabet: &Alphabet) -> Option<Instance> {
        let dist = dist_from_weights(alphabet, &self.weights)?;
        let n = alphabet.len();
        let phi = WorldSet::from_mask(n, self.phi);
        if !dist.worlds_p_consistent(&phi) {
            return None;
        }
        Some(Instance { dist, phi, alpha: WorldSet::from_mask(n, self.alpha), beta: WorldSet::from_mask(n, self.beta) })
    }

    fn simpler(&self) -> Vec<Case> {
        let mut out = Vec::new();
        for i in 0..self.weights.len() {
            if self.weights[i] > 0 {
                let mut c = self.clone();
                c.weights[i] = 0;
                out.push(c);
            }
            if self.weights[i] > 1 {
                let mut c = self.clone();
                c.weights[i] = 1;
                out.push(c);
            }
        }
        for bit in 0..self.weights.len() {
            let m = 1u64 << bit;
            for field in 0..3 {
                let mut c = self.clone();
                let target = match field {
                    0 => &mut c.phi,
                    1 => &mut c.alpha,
                    _ => &mut c.beta,
                };
                if *target & m != 0 {
                    *target &= !m;
                    out.push(c);
                }
            }
        }
        out
    }
}

fn random_mask(rng: &mut ChaCha8Rng, full: u64) -> u64 {
    rng.gen::<u64>() & full
}

// About one input in eight is degenerate (⊤ or ⊥).
fn random_input(rng: &mut ChaCha8Rng, full: u64) -> u64 {
    if rng.gen_ratio(1, 8) {
        if rng.gen_bool(0.5) {
            full
        } else {
            0
        }
    } else {
        random_mask(rng, full)
    }
}

fn random_case(rng: &mut ChaCha8Rng, worlds: usize) -> Case {
    let full = if worlds == 64 { u64::MAX } else { (1u64 << worlds) - 1 };
    let weights = loop {
        let w: Vec<u32> = (0..worlds).map(|_| rng.gen_range(0..=MAX_WEIGHT)).collect();
        if w.iter().any(|&x| x > 0) {
            break w;
        }
    };
    let phi = loop {
        let m = random_mask(rng, full);
        if (0..worlds).any(|i| (m >> i) & 1 == 1 && weights[i] > 0) {
            break m;
        }
    };
    Case { weights, phi, alpha: random_input(rng, full), beta: random_input(rng, full) }
}

// Greedily applies simplifications that keep the postulate violated.
fn shrink(case: Case, postulate: Postulate, op: &dyn ChangeOperator, alphabet: &Alphabet) -> Case {
    let mut current = case;
    'outer: loop {
        for candidate in current.simpler() {
            if let Some(inst) = candidate.instance(alphabet) {
                if check(postulate, op, &inst).is_violated() {
                    current = candidate;
                    continue 'outer;
                }
            }
        }
        return current;
    }
}

/// Checks `config.operator` against the postulates of `config.family` on
/// `config.cases` random instances. Deterministic for a given seed; the first
/// violation of each postulate is shrunk before being reported.
pub fn fuzz(config: &FuzzConfig) -> Result<PostulateReport> {
    if config.letters == 0 || config.letters > MAX_FUZZ_LETTERS {
        return Err(Error::ExhaustiveCap { operation: "fuzzing", letters: config.letters, max: MAX_FUZZ_LETTERS });
    }
    let alphabet = Alphabet::new(LETTER_NAMES[..config.letters].iter().copied())?;
    let op = config.operator;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut report = PostulateReport::new(config.family, &op);
    for _ in 0..config.cases {
        let case = random_case(&mut rng, alphabet.world_count());
        let inst = case.instance(&alphabet).expect("generated cases are valid");
        report.cases += 1;
        for verdict in &mut report.verdicts {
            let mut outcome = check(verdict.postulate, &op, &inst);
            if outcome.is_violated() && verdict.witness.is_none() && config.shrink {
                let small = shrink(case.clone(), verdict.postulate, &op, &alphabet);
                let small = small.instance(&alphabet).expect("shrinking keeps cases valid");
                let shrunk = check(verdict.postulate, &op, &small);
                debug_assert!(shrunk.is_violated());
                if let Outcome::Violated(w) = shrunk {
                    verdict.witness = Some(*w);
                }
                outcome = Outcome::Violated(Box::new(verdict.witness.clone().expect("just set")));
            }
            verdict.record(outcome);
        }
    }
    Ok(report)
}

/// Checks `op` against `family` on every (φ, α, β) triple of world subsets
/// for each distribution, skipping P-inconsistent φ.
pub fn exhaustive(family: Family, op: &dyn ChangeOperator, dists: &[ProbDist]) -> Result<PostulateReport> {
    let mut report = PostulateReport::new(family, op);
    for dist in dists {
        let n = dist.letters();
        if n > MAX_EXHAUSTIVE_LETTERS {
            return Err(Error::ExhaustiveCap { operation: "exhaustive postulate check", letters: n, max: MAX_EXHAUSTIVE_LETTERS });
        }
        let subsets = 1u64 << (1 << n);
        for phi in 0..subsets {
            let phi = WorldSet::from_mask(n, phi);
            if !dist.worlds_p_consistent(&phi) {
                continue;
            }
            for alpha in 0..subsets {
                for beta in 0..subsets {
                    let inst = Instance {
                        dist: dist.clone(),
                        phi: phi.clone(),
                        alpha: WorldSet::from_mask(n, alpha),
                        beta: WorldSet::from_mask(n, beta),
                    };
                    report.add(op, &inst);
                }
            }
        }
    }
    Ok(report)
}

/// A fixed family of distributions on small integer grids: uniform, all
/// masses distinct, ties, and several with zero-mass worlds.
pub fn grid_distributions(alphabet: &Alphabet) -> Vec<ProbDist> {
    let worlds = alphabet.world_count();
    let patterns: [fn(usize) -> u32; 5] = [
        |_| 1,
        |i| i as u32 + 1,
        |i| (i % 3) as u32,
        |i| 1 + 2 * (i % 2) as u32,
        |i| (3 - (i % 4)) as u32,
    ];
    let mut out: Vec<ProbDist> = Vec::new();
    for pattern in patterns {
        let weights: Vec<u32> = (0..worlds).map(pattern).collect();
        if let Some(d) = dist_from_weights(alphabet, &weights) {
            if !out.contains(&d) {
                out.push(d);
            }
        }
    }
    out
}
