//! Exact-arithmetic belief change driven by knowledge measures.
//!
//! Beliefs are propositional formulas over a finite [`logic::Alphabet`]; an
//! agent's background uncertainty is a [`prob::ProbDist`] over worlds with
//! exact rational masses. The [`change`] module implements contraction,
//! expansion, revision and severe withdrawal selecting the least surprising
//! worlds, [`rankings`] bridges to faithful rankings, and [`postulates`]
//! checks the rationality postulates against any operator.

pub mod change;
pub mod error;
pub mod logic;
pub mod measures;
pub mod postulates;
pub mod prob;
pub mod rankings;
pub mod scenarios;

pub use error::{Error, Result};
