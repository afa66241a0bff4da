use thiserror::Error;

/// Errors produced while building or querying an index.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// The input contains the reserved sentinel byte (0).
    #[error("sentinel byte 0x00 found at offset {offset}; input symbols must be in 1..=255")]
    SentinelInInput { offset: usize },

    /// The pattern contains the reserved sentinel byte (0).
    #[error("pattern contains the sentinel byte 0x00 at offset {offset}")]
    SentinelInPattern { offset: usize },

    #[error("empty pattern")]
    EmptyPattern,

    #[error("position {pos} out of range 1..={max}")]
    OutOfBounds { pos: u64, max: u64 },

    #[error("unknown SLP variable X{0}")]
    UnknownVariable(u32),

    /// A construction step reached a state that valid input cannot produce.
    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("cycle detected while resolving {0}")]
    Cycle(String),

    #[error("oracle refused input of length {len} (bound {bound})")]
    OracleBound { len: usize, bound: usize },

    #[error(transparent)]
    Format(#[from] FormatError),
}

/// Errors raised while decoding an index file.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("bad magic: expected \"LCDW\"")]
    BadMagic,

    #[error("unsupported format version {0}")]
    UnsupportedVersion(u16),

    #[error("unsupported id width {0}")]
    UnsupportedIdWidth(u8),

    #[error("truncated input while reading {0}")]
    Truncated(&'static str),

    #[error("{table}[{index}]: id {value} out of range (limit {limit})")]
    IdOutOfRange {
        table: &'static str,
        index: u64,
        value: u64,
        limit: u64,
    },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("{0} trailing bytes after index data")]
    TrailingBytes(usize),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
