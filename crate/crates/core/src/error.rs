//! Error type shared by the library modules.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("index category: {0}")]
    IndexCategory(String),
    #[error("presheaf is not functorial: {0}")]
    NotFunctorial(String),
    #[error("morphism is not natural: {0}")]
    NotNatural(String),
    #[error("objects live over different index categories")]
    MismatchedIndex,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("signature: {0}")]
    Signature(String),
    #[error("term: {0}")]
    Term(String),
    #[error("equation {name}: {reason}")]
    Equation { name: String, reason: String },
    #[error("operation requires the trivial index category: {0}")]
    NonTrivialIndex(String),
    #[error("resource ceiling exceeded: {explored} search nodes (ceiling {ceiling}, naive table space {projected})")]
    Ceiling {
        explored: u64,
        ceiling: u64,
        projected: String,
    },
    #[error("scale: {0}")]
    Scale(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
