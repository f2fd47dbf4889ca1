use std::fmt;

use super::alphabet::{Alphabet, World};
use super::worlds::WorldSet;
use crate::error::{Error, Result};

/// Propositional formula. `Top` and `Bottom` are only meaningful as a whole
/// formula; the smart constructors ([`Formula::and`], [`Formula::negate`], ...)
/// fold them away so they never end up nested.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Top,
    Bottom,
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(letter: impl Into<String>) -> Self {
        Formula::Atom(letter.into())
    }

    /// Literal for letter `letter`, negated when `positive` is false.
    pub fn literal(letter: impl Into<String>, positive: bool) -> Self {
        let atom = Formula::atom(letter);
        if positive {
            atom
        } else {
            Formula::Not(Box::new(atom))
        }
    }

    pub fn negate(self) -> Self {
        match self {
            Formula::Top => Formula::Bottom,
            Formula::Bottom => Formula::Top,
            f => Formula::Not(Box::new(f)),
        }
    }

    pub fn and(self, other: Formula) -> Self {
        match (self, other) {
            (Formula::Bottom, _) | (_, Formula::Bottom) => Formula::Bottom,
            (Formula::Top, f) | (f, Formula::Top) => f,
            (a, b) => Formula::And(Box::new(a), Box::new(b)),
        }
    }

    pub fn or(self, other: Formula) -> Self {
        match (self, other) {
            (Formula::Top, _) | (_, Formula::Top) => Formula::Top,
            (Formula::Bottom, f) | (f, Formula::Bottom) => f,
            (a, b) => Formula::Or(Box::new(a), Box::new(b)),
        }
    }

    pub fn implies(self, other: Formula) -> Self {
        match (self, other) {
            (Formula::Bottom, _) | (_, Formula::Top) => Formula::Top,
            (Formula::Top, f) => f,
            (f, Formula::Bottom) => f.negate(),
            (a, b) => Formula::Implies(Box::new(a), Box::new(b)),
        }
    }

    pub fn iff(self, other: Formula) -> Self {
        match (self, other) {
            (Formula::Top, f) | (f, Formula::Top) => f,
            (Formula::Bottom, f) | (f, Formula::Bottom) => f.negate(),
            (a, b) => Formula::Iff(Box::new(a), Box::new(b)),
        }
    }

    /// Conjunction of all formulas; `Top` when empty.
    pub fn conjunction(formulas: impl IntoIterator<Item = Formula>) -> Self {
        formulas.into_iter().fold(Formula::Top, Formula::and)
    }

    /// Disjunction of all formulas; `Bottom` when empty.
    pub fn disjunction(formulas: impl IntoIterator<Item = Formula>) -> Self {
        formulas.into_iter().fold(Formula::Bottom, Formula::or)
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, Formula::Top | Formula::Bottom)
    }

    fn children(&self) -> (Option<&Formula>, Option<&Formula>) {
        match self {
            Formula::Top | Formula::Bottom | Formula::Atom(_) => (None, None),
            Formula::Not(f) => (Some(f), None),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                (Some(a), Some(b))
            }
        }
    }

    /// True when `Top`/`Bottom` occurs strictly inside the formula.
    pub fn has_nested_constant(&self) -> bool {
        fn inner(f: &Formula) -> bool {
            match f.children() {
                (None, _) => f.is_constant(),
                (Some(a), b) => inner(a) || b.is_some_and(inner),
            }
        }
        !self.is_constant() && inner(self)
    }

    /// Syntactic length: atoms count 1, every connective adds 1.
    /// Constants are counted like atoms.
    pub fn length(&self) -> usize {
        match self.children() {
            (None, _) => 1,
            (Some(a), None) => 1 + a.length(),
            (Some(a), Some(b)) => 1 + a.length() + b.length(),
        }
    }

    /// Letters occurring in the formula, in order of first occurrence.
    pub fn letters(&self) -> Vec<String> {
        fn collect(f: &Formula, out: &mut Vec<String>) {
            if let Formula::Atom(l) = f {
                if !out.contains(l) {
                    out.push(l.clone());
                }
            }
            let (a, b) = f.children();
            if let Some(a) = a {
                collect(a, out);
            }
            if let Some(b) = b {
                collect(b, out);
            }
        }
        let mut out = Vec::new();
        collect(self, &mut out);
        out
    }

    /// Alphabet made of the formula's own letters; `None` for letter-free formulas.
    pub fn own_alphabet(&self) -> Result<Option<Alphabet>> {
        let letters = self.letters();
        if letters.is_empty() {
            Ok(None)
        } else {
            Alphabet::new(letters).map(Some)
        }
    }

    /// Whether `world` satisfies the formula.
    pub fn satisfied_by(&self, world: World, alphabet: &Alphabet) -> Result<bool> {
        Ok(match self {
            Formula::Top => true,
            Formula::Bottom => false,
            Formula::Atom(l) => {
                world.bit(alphabet.index_of(l).ok_or_else(|| Error::AlphabetMismatch(l.clone()))?)
            }
            Formula::Not(f) => !f.satisfied_by(world, alphabet)?,
            Formula::And(a, b) => a.satisfied_by(world, alphabet)? && b.satisfied_by(world, alphabet)?,
            Formula::Or(a, b) => a.satisfied_by(world, alphabet)? || b.satisfied_by(world, alphabet)?,
            Formula::Implies(a, b) => !a.satisfied_by(world, alphabet)? || b.satisfied_by(world, alphabet)?,
            Formula::Iff(a, b) => a.satisfied_by(world, alphabet)? == b.satisfied_by(world, alphabet)?,
        })
    }

    /// The models of the formula over `alphabet`.
    pub fn models(&self, alphabet: &Alphabet) -> Result<WorldSet> {
        let n = alphabet.len();
        Ok(match self {
            Formula::Top => WorldSet::full(n),
            Formula::Bottom => WorldSet::empty(n),
            Formula::Atom(l) => {
                let i = alphabet.index_of(l).ok_or_else(|| Error::AlphabetMismatch(l.clone()))?;
                WorldSet::letter(n, i)
            }
            Formula::Not(f) => f.models(alphabet)?.complement(),
            Formula::And(a, b) => a.models(alphabet)?.intersection(&b.models(alphabet)?),
            Formula::Or(a, b) => a.models(alphabet)?.union(&b.models(alphabet)?),
            Formula::Implies(a, b) => a.models(alphabet)?.complement().union(&b.models(alphabet)?),
            Formula::Iff(a, b) => a.models(alphabet)?.symmetric_difference(&b.models(alphabet)?).complement(),
        })
    }

    /// Checks that every letter of the formula belongs to `alphabet`.
    pub fn check_letters(&self, alphabet: &Alphabet) -> Result<()> {
        match self.letters().into_iter().find(|l| !alphabet.contains(l)) {
            Some(l) => Err(Error::AlphabetMismatch(l)),
            None => Ok(()),
        }
    }

    pub fn is_satisfiable(&self, alphabet: &Alphabet) -> Result<bool> {
        Ok(!self.models(alphabet)?.is_empty())
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Iff(..) => 1,
            Formula::Implies(..) => 2,
            Formula::Or(..) => 3,
            Formula::And(..) => 4,
            Formula::Not(_) => 5,
            _ => 6,
        }
    }
}

/// Conjunction of the literals of `world`, in alphabet order.
pub fn formula_of_world(world: World, alphabet: &Alphabet) -> Formula {
    let mut literals =
        alphabet.letters().iter().enumerate().map(|(i, l)| Formula::literal(l.clone(), world.bit(i)));
    let first = literals.next().expect("alphabet is never empty");
    literals.fold(first, |acc, lit| Formula::And(Box::new(acc), Box::new(lit)))
}

/// Disjunction of the world conjunctions of `worlds`; `Bottom` for the empty
/// set and `Top` for the full set.
pub fn formula_of_worlds(worlds: &WorldSet, alphabet: &Alphabet) -> Formula {
    assert_eq!(worlds.letters(), alphabet.len(), "world set does not match alphabet");
    if worlds.is_empty() {
        return Formula::Bottom;
    }
    if worlds.is_full() {
        return Formula::Top;
    }
    let mut terms = worlds.iter().map(|w| formula_of_world(w, alphabet));
    let first = terms.next().expect("non-empty");
    terms.fold(first, |acc, t| Formula::Or(Box::new(acc), Box::new(t)))
}

pub fn entails(phi: &Formula, psi: &Formula, alphabet: &Alphabet) -> Result<bool> {
    Ok(phi.models(alphabet)?.is_subset(&psi.models(alphabet)?))
}

pub fn strictly_entails(phi: &Formula, psi: &Formula, alphabet: &Alphabet) -> Result<bool> {
    let (a, b) = (phi.models(alphabet)?, psi.models(alphabet)?);
    Ok(a.is_subset(&b) && !b.is_subset(&a))
}

pub fn equivalent(phi: &Formula, psi: &Formula, alphabet: &Alphabet) -> Result<bool> {
    Ok(phi.models(alphabet)? == psi.models(alphabet)?)
}

/// All worlds over `to` that agree with `world` (a world over `from`) on the letters of `from`.
pub fn extend_world(world: World, from: &Alphabet, to: &Alphabet) -> Result<WorldSet> {
    let positions = from.embedding_into(to)?;
    let mut base = World::from_index(0);
    for (i, &pos) in positions.iter().enumerate() {
        base = base.with_bit(pos, world.bit(i));
    }
    let free: Vec<usize> = (0..to.len()).filter(|p| !positions.contains(p)).collect();
    let mut out = WorldSet::empty(to.len());
    for combo in 0u32..(1 << free.len()) {
        let mut w = base;
        for (k, &pos) in free.iter().enumerate() {
            w = w.with_bit(pos, (combo >> k) & 1 == 1);
        }
        out.insert(w);
    }
    Ok(out)
}

/// Restriction of `world` (over `from`) to the letters of the sub-alphabet `to`.
pub fn restrict_world(world: World, from: &Alphabet, to: &Alphabet) -> Result<World> {
    let positions = to.embedding_into(from)?;
    Ok(positions
        .iter()
        .enumerate()
        .fold(World::from_index(0), |acc, (i, &pos)| acc.with_bit(i, world.bit(pos))))
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child(f: &mut fmt::Formatter<'_>, c: &Formula, parens: bool) -> fmt::Result {
            if parens {
                write!(f, "({c})")
            } else {
                write!(f, "{c}")
            }
        }
        let p = self.precedence();
        match self {
            Formula::Top => f.write_str("true"),
            Formula::Bottom => f.write_str("false"),
            Formula::Atom(l) => f.write_str(l),
            Formula::Not(inner) => {
                f.write_str("~")?;
                child(f, inner, inner.precedence() < p)
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Iff(a, b) => {
                // left-associative
                let op = match self {
                    Formula::And(..) => " & ",
                    Formula::Or(..) => " | ",
                    _ => " <-> ",
                };
                child(f, a, a.precedence() < p)?;
                f.write_str(op)?;
                child(f, b, b.precedence() <= p)
            }
            Formula::Implies(a, b) => {
                child(f, a, a.precedence() <= p)?;
                f.write_str(" -> ")?;
                child(f, b, b.precedence() < p)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma(s: &str) -> Alphabet {
        Alphabet::parse(s).unwrap()
    }

    #[test]
    fn lengths() {
        let p = Formula::atom("p");
        assert_eq!(p.length(), 1);
        assert_eq!(p.clone().negate().length(), 2);
        assert_eq!(p.and(Formula::atom("q")).length(), 3);
    }

    #[test]
    fn letters_of_constants_are_empty() {
        assert!(Formula::Top.letters().is_empty());
        let p = Formula::atom("p");
        assert_eq!(p.clone().and(p.negate()).letters(), vec!["p".to_string()]);
    }

    #[test]
    fn smart_constructors_never_nest_constants() {
        let p = Formula::atom("p");
        assert_eq!(p.clone().and(Formula::Top), p);
        assert_eq!(p.clone().or(Formula::Top), Formula::Top);
        assert_eq!(Formula::Bottom.implies(p.clone()), Formula::Top);
        assert_eq!(p.clone().implies(Formula::Bottom), p.clone().negate());
        assert_eq!(Formula::Bottom.iff(p.clone()), p.clone().negate());
        assert!(!p.clone().and(Formula::atom("q")).has_nested_constant());
        let raw = Formula::And(Box::new(p), Box::new(Formula::Top));
        assert!(raw.has_nested_constant());
    }

    #[test]
    fn models_of_constants() {
        let s = sigma("a b c");
        assert!(Formula::Bottom.models(&s).unwrap().is_empty());
        assert!(Formula::Top.models(&s).unwrap().is_full());
    }

    #[test]
    fn unknown_letter_is_a_mismatch() {
        let s = sigma("a");
        assert_eq!(Formula::atom("b").models(&s), Err(Error::AlphabetMismatch("b".into())));
    }

    #[test]
    fn single_world_conjunction() {
        let s = sigma("b p o f");
        let w = s.parse_world("1101").unwrap();
        assert_eq!(formula_of_world(w, &s).to_string(), "b & p & ~o & f");
        let set = WorldSet::from_worlds(4, [w]);
        assert_eq!(formula_of_worlds(&set, &s).to_string(), "b & p & ~o & f");
        assert_eq!(formula_of_worlds(&WorldSet::empty(4), &s), Formula::Bottom);
        assert_eq!(formula_of_worlds(&WorldSet::full(4), &s), Formula::Top);
    }

    #[test]
    fn extension_sizes() {
        let a = sigma("a");
        let ab = sigma("a b");
        let w = a.parse_world("1").unwrap();
        let ext = extend_world(w, &a, &ab).unwrap();
        assert_eq!(ext, WorldSet::parse(&ab, &["11", "10"]).unwrap());
        assert_eq!(extend_world(w, &a, &a).unwrap(), WorldSet::from_worlds(1, [w]));
        assert!(extend_world(w, &ab, &a).is_err());
        let big = sigma("x a y z");
        assert_eq!(extend_world(w, &a, &big).unwrap().len(), 8);
    }

    #[test]
    fn restriction_inverts_extension() {
        let small = sigma("f b");
        let big = sigma("b p f");
        for w in small.worlds() {
            for e in extend_world(w, &small, &big).unwrap().iter() {
                assert_eq!(restrict_world(e, &big, &small).unwrap(), w);
            }
        }
    }
}
