use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("body {0} is too small to invert")]
    NonInvertible(f64),
    #[error("{what} size {n} exceeds the limit {max}")]
    SizeLimit { what: &'static str, n: usize, max: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("partitions are not comparable")]
    NotComparable,
    #[error("expected an odd size, got {0}")]
    EvenInput(usize),
    #[error("block is not a block of the partition")]
    BlockNotInPartition,
    #[error("partition has no zero-block")]
    NoZeroBlock,
    #[error("operands live over different alphabets")]
    AlphabetMismatch,
    #[error("derivation is incompatible with the relation of generator {0}")]
    RelationViolation(String),
    #[error("word of length {len} exceeds the truncation degree {degree}")]
    DegreeOverflow { len: usize, degree: usize },
    #[error("no moment stored for word {0}")]
    MissingMoment(String),
    #[error("cumulant spec has no entry for tuple {0}")]
    IncompleteSpec(String),
    #[error("generator name {0} is used by more than one input")]
    AlphabetCollision(String),
    #[error("incomplete input: {0}")]
    IncompleteInput(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
