use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("value {0} appears more than once")]
    DuplicateValue(u64),
    #[error("value {value} is outside 1..={n}")]
    OutOfRange { value: i64, n: usize },
    #[error("malformed permutation text: {0}")]
    Malformed(String),
    #[error("k = {k} exceeds permutation size {n}")]
    KTooLarge { k: usize, n: usize },
    #[error("index {index} is outside 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("invalid range: lower bound {lo} exceeds upper bound {hi}")]
    InvalidRange { lo: usize, hi: usize },
    #[error("malformed corner tree notation: {0}")]
    TreeSyntax(String),
    #[error("size {size} exceeds the configured bound {bound}")]
    BoundExceeded { size: usize, bound: usize },
    #[error("persisted 4-pattern basis is missing or corrupt: {0}")]
    BasisMissing(String),
    #[error("ties present in the {0} coordinate")]
    TiesPresent(&'static str),
    #[error("non-finite value in sample")]
    NonFinite,
    #[error("need at least {needed} points, got {n}")]
    NTooSmall { needed: usize, n: usize },
    #[error("cell ({x}, {y}) was not registered when the tree was built")]
    UnregisteredPoint { x: usize, y: usize },
    #[error("no fast counting path for patterns of size {0}")]
    NoFastPath(usize),
    #[error("{0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
