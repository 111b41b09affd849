use thiserror::Error;

/// Errors produced by any of the protocol modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed word: {0}")]
    MalformedWord(String),
    #[error("rank mismatch: word uses generator {found} but ambient rank is {rank}")]
    RankMismatch { found: u32, rank: usize },
    #[error("invalid move: {0}")]
    InvalidMove(String),
    #[error("move index {index} out of bounds for tuple of arity {arity}")]
    IndexOutOfBounds { index: usize, arity: usize },
    #[error("delete applied to non-trivial element at position {index}")]
    DeleteNonTrivial { index: usize },
    #[error("transcript is not regular (contains a delete)")]
    SingularTranscript,
    #[error("Nielsen reduction stalled: {0}")]
    ReductionStall(String),
    #[error("matrix is not in SL(2,Q): determinant {det}")]
    NotUnimodular { det: String },
    #[error("Lehner parameter constraint violated at index {index}: {reason}")]
    LehnerConstraint { index: usize, reason: String },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("coverage failure: missing item slots {missing:?}")]
    CoverageFailure { missing: Vec<usize> },
    #[error("duplicate participant index {0}")]
    DuplicateParticipant(usize),
    #[error("conflicting payloads for item slot {slot}")]
    SlotConflict { slot: usize },
    #[error("decryption failure at position {position}: {reason}")]
    DecryptionFailure { position: usize, reason: String },
    #[error("images do not form a free basis: {0}")]
    NotABasis(String),
    #[error("division by zero: {0}")]
    DivisionByZero(String),
}

impl Error {
    /// Stable machine-readable kind, used by the CLI for error reporting.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::MalformedWord(_) => "malformed-word",
            Error::RankMismatch { .. } => "rank-mismatch",
            Error::InvalidMove(_) => "invalid-move",
            Error::IndexOutOfBounds { .. } => "index-out-of-bounds",
            Error::DeleteNonTrivial { .. } => "delete-non-trivial",
            Error::SingularTranscript => "singular-transcript",
            Error::ReductionStall(_) => "reduction-stall",
            Error::NotUnimodular { .. } => "not-unimodular",
            Error::LehnerConstraint { .. } => "lehner-constraint",
            Error::InvalidParams(_) => "invalid-params",
            Error::CoverageFailure { .. } => "coverage-failure",
            Error::DuplicateParticipant(_) => "duplicate-participant",
            Error::SlotConflict { .. } => "slot-conflict",
            Error::DecryptionFailure { .. } => "decryption-failure",
            Error::NotABasis(_) => "not-a-basis",
            Error::DivisionByZero(_) => "division-by-zero",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
