//! Error type shared across the engine.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("feature component is not finite at position {position}")]
    NonFiniteComponent { position: usize },

    #[error("image index {index} out of range (entry count {len})")]
    IndexOutOfRange { index: u64, len: u64 },

    #[error("list id {list} out of range ({n_lists} lists)")]
    ListOutOfRange { list: usize, n_lists: usize },

    #[error("cannot train on an empty sample set")]
    EmptyTrainingSet,

    #[error("requested {requested} lists but only {distinct} distinct samples")]
    TooManyLists { requested: usize, distinct: usize },

    #[error("nprobe {nprobe} out of range [1, {n_lists}]")]
    NprobeOutOfRange { nprobe: usize, n_lists: usize },

    #[error("url is empty")]
    EmptyUrl,

    #[error("url is {len} bytes, exceeds the {max}-byte limit")]
    UrlTooLong { len: usize, max: usize },

    #[error("feature provider failed for {url}: {reason}")]
    Provider { url: String, reason: String },

    #[error("codebook has not been trained")]
    UntrainedCodebook,

    #[error("corrupt snapshot at byte {offset}: {what}")]
    CorruptSnapshot { offset: u64, what: String },

    #[error("parse error at line {line}: {what}")]
    Parse { line: usize, what: String },

    #[error("bad config key {key}: {what}")]
    Config { key: String, what: String },

    #[error("all replicas of partition {partition} failed")]
    PartitionUnavailable { partition: u32 },

    #[error("all partitions failed")]
    AllPartitionsFailed,

    #[error("all brokers failed")]
    AllBrokersFailed,

    #[error("remote node returned an error: {0}")]
    Remote(String),

    #[error("malformed wire frame: {0}")]
    Wire(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn corrupt(offset: u64, what: impl Into<String>) -> Self {
        Error::CorruptSnapshot {
            offset,
            what: what.into(),
        }
    }
}
