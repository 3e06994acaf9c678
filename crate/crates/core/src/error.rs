use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("zero linear form where a nonzero form is required")]
    ZeroForm,

    #[error("positive part has an empty flag")]
    EmptyFlag,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid Coxeter matrix: {0}")]
    InvalidMatrix(String),

    #[error("group is not finite within the cap of {cap} elements")]
    NotFinite { cap: usize },

    #[error("invalid arrangement: {0}")]
    InvalidArrangement(String),

    #[error("facet is not realizable in this arrangement")]
    UnrealizableFacet,

    #[error("arrangement is not complete: missing coordinate hyperplane for class `{0}`")]
    NotComplete(String),

    #[error("invalid weight function: {0}")]
    InvalidWeight(String),

    #[error("not a left cell of the partition for this weight")]
    NotACell,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
