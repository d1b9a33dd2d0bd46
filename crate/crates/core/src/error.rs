use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate channel: matrix is all zeros")]
    DegenerateChannel,

    #[error("degenerate level pair: b_high ({0}) must exceed b_low")]
    DegenerateLevelPair(u32),

    #[error("invalid level pair ({b_low}, {b_high}): requires b_low <= b_ref ({b_ref}) <= b_high")]
    LevelOrder { b_low: u32, b_ref: u32, b_high: u32 },

    #[error("unreachable reference: all antennas at b_high reach {achieved} < {target}")]
    UnreachableReference { achieved: f64, target: f64 },

    #[error("length mismatch: expected {expected} antennas, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("inconsistent allocation: {0}")]
    InconsistentAllocation(String),

    #[error("no draws requested")]
    NoDraws,
}
