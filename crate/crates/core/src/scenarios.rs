//! Small reference scenarios used by the CLI demos and the test suites.

use crate::logic::{parse, Alphabet, Formula};
use crate::prob::ProbDist;
use crate::rankings::FaithfulRanking;

/// Birds: bird, penguin, ostrich, flies, wings.
pub const BIRDS_ALPHABET: &str = "b p o f w";

/// Birds fly; penguins and ostriches are birds, and nothing is both.
pub const BIRDS_KB: &str = "b & (b -> f) & (p -> b) & (o -> b) & ~(p & o)";

/// Eight possible worlds over [`BIRDS_ALPHABET`]; the rest have mass 0.
pub const BIRDS_DIST: &str = "\
b p o f w
11011 0.1
10111 0.1
10011 0.15
11001 0.15
10101 0.2
10001 0.2
01011 0.07
01010 0.03
";

pub fn birds_alphabet() -> Alphabet {
    Alphabet::parse(BIRDS_ALPHABET).expect("valid alphabet")
}

pub fn birds_dist() -> ProbDist {
    ProbDist::from_text(BIRDS_DIST).expect("valid distribution")
}

pub fn birds_kb() -> Formula {
    parse(BIRDS_KB, &birds_alphabet()).expect("valid formula")
}

/// Three letters ranked around a ∧ b: two worlds at rank 0, four at rank 1
/// (exactly one of a, b), two at rank 2.
pub const ABC_RANKING: &str = "\
a b c
111 0
110 0
101 1
100 1
011 1
010 1
001 2
000 2
";

pub fn abc_ranking() -> FaithfulRanking {
    FaithfulRanking::from_text(ABC_RANKING).expect("valid ranking")
}

/// Two letters where revising twice differs from revising once by the
/// second input even though it contradicts the first.
pub const PQ_DIST: &str = "\
p q
10 0.6
11 0.2
00 0.1
01 0.1
";

pub const PQ_BELIEF: &str = "(p & q) | (~p & ~q)";
pub const PQ_FIRST: &str = "~p & q";
pub const PQ_SECOND: &str = "p";

pub fn pq_dist() -> ProbDist {
    ProbDist::from_text(PQ_DIST).expect("valid distribution")
}

/// Pets: does Bob own a pet, a dog, a cat.
pub const PETS_DIST: &str = "\
p d c
000 0.3
101 0.3
110 0.25
111 0.15
";

pub fn pets_dist() -> ProbDist {
    ProbDist::from_text(PETS_DIST).expect("valid distribution")
}
