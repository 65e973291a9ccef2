use thiserror::Error;

/// Crate-wide error type.
///
/// `Internal` is reserved for falsified invariants: identities that the
/// underlying construction guarantees. Hitting one means a bug (or a
/// broken assumption), and the CLI maps it to exit status 2; everything
/// else is a user error and maps to exit status 1.
#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("unknown vertex id `{0}`")]
    UnknownVertex(String),

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("singular matrix: pivot vanished at elimination stage {stage}")]
    Singular { stage: usize },

    #[error("intersection matrix is not negative definite")]
    NotNegativeDefinite,

    #[error("isolated vertex `{0}`: model construction unavailable")]
    IsolatedVertex(String),

    #[error("open book hypothesis violated at vertex `{vertex}`: {detail}")]
    HypothesisViolated { vertex: String, detail: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("internal invariant failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
