use thiserror::Error;

use crate::prob::Prob;

/// Domain errors raised by the probability operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown label `{label}` in space `{space}`")]
    UnknownLabel { label: String, space: String },

    #[error("space mismatch: {0}")]
    SpaceMismatch(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("ZeroSubdistribution: cannot normalise a subdistribution of total mass 0")]
    ZeroSubdistribution,

    #[error("ZeroScoreMass: total score-weighted mass is 0")]
    ZeroScoreMass,

    #[error("ZeroValidity: cannot condition on a predicate with validity 0")]
    ZeroValidity,

    #[error("IncompleteSupport: labels {} have zero marginal mass", .missing.join(", "))]
    IncompleteSupport { missing: Vec<String> },

    #[error("NotOrthogonal: p + q exceeds 1 at `{label}`")]
    NotOrthogonal { label: String },

    #[error("NotATest: components sum to {sum} at `{label}`, expected 1")]
    NotATest { label: String, sum: Prob },

    #[error("value {value} at `{label}` is outside [0, 1]")]
    NotAProbability { label: String, value: Prob },

    #[error("tag {tag} out of range for arity {arity}")]
    TagOutOfRange { tag: usize, arity: usize },

    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("StateMismatch: the hyper distributions have different underlying states")]
    StateMismatch,

    #[error("channel is not total: no row for `{0}`")]
    MissingRow(String),
}

/// Errors raised while reading textual or JSON input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("invalid rational `{0}` (expected p/q with nonnegative integers)")]
    Rational(String),

    #[error("ket syntax error at offset {offset} in `{input}`: {message}")]
    Ket {
        input: String,
        offset: usize,
        message: String,
    },

    #[error("JSON error at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid object `{object}`: {message}")]
    Invalid { object: String, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
