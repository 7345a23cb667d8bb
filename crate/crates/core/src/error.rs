use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library reports. Polynomials and module elements
/// carried in variants are rendered in the canonical text grammar so a
/// witness can be parsed back and re-checked.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("context mismatch: {0}")]
    Context(String),

    #[error("variable index {index} out of range for {len} variables")]
    Index { index: usize, len: usize },

    #[error("arity mismatch: expected {expected} arguments, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("rank mismatch: expected vectors of length {expected}, got {got}")]
    Rank { expected: usize, got: usize },

    #[error("shape mismatch: expected {expected}, got {got}")]
    Shape { expected: String, got: String },

    #[error("field error: {0}")]
    Field(String),

    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("resource cap exceeded: {0}")]
    Resource(String),

    #[error("relation `{relation}` maps to nonzero `{image}`")]
    RelationViolation { relation: String, image: String },

    #[error("first component of x{index} is `{found}`, expected the variable itself")]
    FirstComponent { index: usize, found: String },

    #[error("f;g and q;pi1 disagree on generator {generator}: `{via_f}` vs `{via_q}`")]
    CommutingCondition {
        generator: String,
        via_f: String,
        via_q: String,
    },
}

impl Error {
    pub fn context(msg: impl Into<String>) -> Self {
        Error::Context(msg.into())
    }
}
