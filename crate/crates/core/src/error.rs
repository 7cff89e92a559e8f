use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("channel {id}: noise must be positive and finite, got {value}")]
    NonPositiveNoise { id: usize, value: f64 },
    #[error("power budget must be nonnegative and finite, got {0}")]
    InvalidBudget(f64),
    #[error("duplicate channel id {0}")]
    DuplicateChannel(usize),
    #[error("empty set: water level undefined without channels")]
    EmptySet,
    #[error("zero budget: water level undefined when no power is available")]
    ZeroBudget,
    #[error("unknown channel id {0}")]
    UnknownChannel(usize),
    #[error("SNR must be nonnegative and finite, got {0}")]
    InvalidSnr(f64),
    #[error("ground set too large: {size} elements exceeds cap {cap}")]
    GroundSetTooLarge { size: usize, cap: usize },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("user {user}: expected {expected} SNR entries, found {found}")]
    WidthMismatch { user: usize, expected: usize, found: usize },
    #[error("weight matrix needs at least one basestation")]
    NoBasestations,
    #[error("instance too large for exhaustive search: {0}")]
    InstanceTooLarge(String),
    #[error("allocation is not a partition of the users: {0}")]
    NotAPartition(String),
    #[error("invalid profile spec: {0}")]
    InvalidSpec(String),
    #[error("no users")]
    NoUsers,
    #[error("{path}: line {line}: {msg}")]
    Parse { path: PathBuf, line: u64, msg: String },
    #[error("no records to summarize")]
    EmptyRecords,
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
