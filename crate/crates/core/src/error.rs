use thiserror::Error;

/// Errors produced by the analysis engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty tuple")]
    EmptyTuple,

    #[error("incomparable values in tuple")]
    Incomparable,

    #[error("arity bound exceeded: arity {arity} is above the configured ceiling {bound}")]
    ArityBoundExceeded { arity: usize, bound: usize },

    #[error("invalid weak order: {0}")]
    InvalidOrder(String),

    #[error("index {index} out of range for arity {arity}")]
    IndexOutOfRange { index: usize, arity: usize },

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("unbound variable `{0}`")]
    UnboundVariable(String),

    #[error("unknown relation symbol `{0}`")]
    UnknownRelation(String),

    #[error("arity mismatch for `{name}`: expected {expected}, found {found}")]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
    },

    #[error("formula has the wrong shape: {0}")]
    Shape(String),

    #[error("invalid operation spec: {0}")]
    InvalidOpSpec(String),

    #[error("unknown operation `{0}`")]
    UnknownOperation(String),

    #[error("GOH requires Ord-Horn input")]
    NotOrdHorn,

    #[error("invalid language: {0}")]
    InvalidLanguage(String),

    #[error("bound out of range: {0}")]
    Bounds(String),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
