use thiserror::Error;

/// Errors produced by the document counting library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("input is empty")]
    EmptyInput,
    #[error("document {doc} is empty")]
    EmptyDocument { doc: usize },
    #[error("document {doc} contains the reserved sentinel byte 0x00")]
    SentinelInDocument { doc: usize },
    #[error("collection of {requested} bytes exceeds the memory budget of {budget} bytes")]
    BudgetExceeded { requested: u64, budget: u64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no document has a substring of length {length}")]
    LengthExceedsDocument { length: usize },
    #[error("select rank {rank} out of range (only {available} available)")]
    SelectOutOfRange { rank: usize, available: usize },
    #[error("position {pos} out of range 1..={len}")]
    PositionOutOfRange { pos: usize, len: usize },
    #[error("invalid range [{sp}, {ep}] for length {n}")]
    RangeInvalid { sp: usize, ep: usize, n: usize },
    #[error("filters require aggregated H placement")]
    IncompatiblePlacement,
    #[error("range [{sp}, {ep}] partially overlaps basic block boundaries")]
    CoverMismatch { sp: usize, ep: usize },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("verification failed: structure {structure} returned {got} for pattern {pattern:?}, oracle says {expected}")]
    VerificationFailed {
        structure: String,
        pattern: String,
        got: usize,
        expected: usize,
    },
    #[error("unknown structure {name:?}; valid names: {valid}")]
    UnknownVariant { name: String, valid: String },
    #[error("malformed index data: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
