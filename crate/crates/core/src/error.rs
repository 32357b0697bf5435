use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("kernel argument must be a finite non-negative distance, got {0}")]
    InvalidDistance(f64),
    #[error("kernel radius must be finite and positive, got {0}")]
    InvalidRadius(f64),
    #[error("points {0} and {1} coincide; the RBF matrix would be singular")]
    DuplicateNodes(usize, usize),
    #[error("factorization lost positive definiteness at row {row} (pivot {pivot:e})")]
    NotPositiveDefinite { row: usize, pivot: f64 },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("support set is empty")]
    EmptySupportSet,
    #[error("group count {m} is outside 1..={n_boundary}")]
    InvalidGroupCount { m: usize, n_boundary: usize },
    #[error("boundary index {0} is out of range")]
    UnknownIndex(usize),
    #[error("group is empty")]
    EmptyGroup,
    #[error("at least 3 boundary nodes are required, got {0}")]
    TooFewBoundaryNodes(usize),
    #[error("selection stalled with error {error:e} above tolerance and no addable candidate")]
    SelectionStalled { error: f64 },
    #[error("invalid count {count}: must lie in {min}..={max}")]
    InvalidCount {
        count: usize,
        min: usize,
        max: usize,
    },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("cell {cell} is degenerate: {reason}")]
    DegenerateCell { cell: usize, reason: String },
    #[error("displacement source has {actual} entries for {expected} boundary nodes")]
    SourceMismatch { expected: usize, actual: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: {message}")]
    InvariantViolation { line: usize, message: String },
    #[error("boundary node {0} has no displacement")]
    MissingNode(usize),
    #[error("line {line}: node {node} listed twice")]
    DuplicateNode { line: usize, node: usize },
    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
