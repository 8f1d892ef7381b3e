use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected tuples of length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("level {level} is outside 1..={max}")]
    LevelOutOfRange { level: usize, max: usize },

    #[error("generator index {index} is outside 1..={max}")]
    GeneratorOutOfRange { index: usize, max: usize },

    #[error("monomial {0} is not of the shape of an element of T")]
    NotInT(String),

    #[error("no idempotent with entries <= {bound} lies in the support of the character")]
    EmptySupport { bound: u64 },

    #[error("the character is identically zero (its generators multiply to 0)")]
    ZeroCharacter,

    #[error("character at {base} is not in the domain of {elem}")]
    Undefined { base: String, elem: String },

    #[error("arrows are not composable: source {source_index} differs from range {range}")]
    NotComposable { source_index: String, range: String },

    #[error("({z}; {x}; {w}) is not a member of the Sheu groupoid")]
    NotMember { z: i64, x: String, w: String },

    #[error("germ {0} has no preimage under psi")]
    NotInImage(String),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("invalid truncation: {0}")]
    InvalidTruncation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
