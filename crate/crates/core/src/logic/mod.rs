//! Propositional syntax and possible-worlds semantics.

mod alphabet;
mod formula;
mod parse;
mod worlds;

pub use alphabet::{Alphabet, World, MAX_LETTERS};
pub use formula::{
    entails, equivalent, extend_world, formula_of_world, formula_of_worlds, restrict_world, strictly_entails,
    Formula,
};
pub use parse::{parse, parse_unchecked};
pub use worlds::WorldSet;
