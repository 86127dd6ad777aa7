use thiserror::Error;

/// Errors produced across the crate.
///
/// Player and cell indices carried by variants are 0-based; the `Display`
/// output shifts them to the 1-based numbering used in reports.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed rational literal {0:?}")]
    ParseRational(String),

    #[error("matrix is not square or has the wrong size: {0}")]
    Shape(String),

    #[error("invalid match matrix at cell ({r}, {c}): {reason}", r = .row + 1, c = .col + 1)]
    InvalidMatrix { row: usize, col: usize, reason: String },

    #[error("size mismatch: expected {expected} players, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },

    #[error("invalid player or argument: {0}")]
    InvalidArgument(String),

    #[error("distinctness precondition violated: {0}")]
    Distinctness(String),

    #[error("not a probability vector: {0}")]
    NotDistribution(String),

    #[error("tournament exceeded its declared bound of {bound} matches")]
    DepthExceeded { bound: usize },

    #[error("evaluation visited more than {limit} states (set TOURNEY_MAX_STATES to raise)")]
    StateLimit { limit: usize },

    #[error("state {state} has no Match decision")]
    NotMatchState { state: String },

    #[error("token budget exceeded: total token weight {total} > 1 at {context}")]
    TokenBudget { total: String, context: String },

    #[error("ambiguous submatrix identification: {0}")]
    AmbiguousIdentification(String),

    #[error("invalid digraph: {0}")]
    InvalidDigraph(String),

    #[error("size guard exceeded: {0}")]
    Guard(String),

    #[error("not doubly monotonic: {0}")]
    NotDoublyMonotonic(String),

    #[error("linear program error: {0}")]
    Lp(String),

    #[error("i/o or format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
