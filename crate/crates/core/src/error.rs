use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("alphabet must contain at least one letter")]
    EmptyAlphabet,
    #[error("alphabet has {count} letters, the limit is {max}")]
    TooManyLetters { count: usize, max: usize },
    #[error("`{0}` is not a valid propositional letter")]
    InvalidLetter(String),
    #[error("letter `{0}` occurs more than once in the alphabet")]
    DuplicateLetter(String),

    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown letter `{letter}` at position {pos}")]
    UnknownLetter { letter: String, pos: usize },
    #[error("constant at position {pos} may only appear as the whole formula")]
    NestedConstant { pos: usize },
    #[error("formula uses letter `{0}` which is not in the alphabet")]
    AlphabetMismatch(String),
    #[error("alphabet {{{sub}}} is not contained in {{{sup}}}")]
    NotSubAlphabet { sub: String, sup: String },
    #[error("invalid world `{0}`")]
    InvalidWorld(String),

    #[error("invalid rational number `{0}`")]
    InvalidRational(String),
    #[error("world {world} has negative mass {mass}")]
    NegativeMass { world: String, mass: String },
    #[error("masses sum to {0}, expected exactly 1")]
    MassSum(String),
    #[error("expected {expected} masses, got {got}")]
    WrongWorldCount { expected: usize, got: usize },
    #[error("world {0} is listed twice")]
    DuplicateWorld(String),
    #[error("line {line}: {message}")]
    FileFormat { line: usize, message: String },
    #[error("json: {0}")]
    Json(String),

    #[error("belief is not P-consistent under the given distribution")]
    PInconsistent,
    #[error("{operation} enumerates exhaustively and is limited to {max} letters (got {letters})")]
    ExhaustiveCap { operation: &'static str, letters: usize, max: usize },
    #[error("logarithm base must be a finite number greater than 1, got {0}")]
    InvalidBase(String),
    #[error("invalid substitution: {0}")]
    InvalidSubstitution(String),
    #[error("invalid ranking: {0}")]
    InvalidRanking(String),
    #[error("relation is not a total preorder: {0}")]
    NotPreorder(String),
    #[error("ranking is not faithful to the belief: {0}")]
    NotFaithful(String),
    #[error("{0}")]
    InvalidArgument(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Json(err.to_string())
    }
}
