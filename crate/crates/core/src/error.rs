use std::fmt;

use thiserror::Error;

/// Which kind of line a Latin-property violation was found on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineKind {
    Row,
    Column,
}

impl fmt::Display for LineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LineKind::Row => f.write_str("row"),
            LineKind::Column => f.write_str("column"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("table is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare {
        row: usize,
        len: usize,
        expected: usize,
    },

    #[error("symbol {symbol} at ({row}, {col}) is outside 0..{order}")]
    SymbolOutOfRange {
        row: usize,
        col: usize,
        symbol: usize,
        order: usize,
    },

    #[error("not a Latin square: symbol {symbol} repeated in {line} {index}")]
    NotLatin {
        line: LineKind,
        index: usize,
        symbol: usize,
    },

    #[error("invalid order {0}")]
    InvalidOrder(usize),

    #[error("{what} = {value} is outside the supported range {range}")]
    OutOfGuard {
        what: &'static str,
        value: usize,
        range: &'static str,
    },

    #[error("symbol {symbol} does not fit in {k} bits")]
    SymbolTooWide { symbol: usize, k: u8 },

    #[error("symbol {symbol} is outside the quasigroup of order {order}")]
    InvalidSymbol { symbol: usize, order: usize },

    #[error("{0} must not be empty")]
    Empty(&'static str),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("bits per symbol k = {0} is outside 1..=8")]
    InvalidK(usize),

    #[error("quasigroup order {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("need {needed} bytes to unpack, have {available}")]
    InsufficientBytes { needed: usize, available: usize },

    #[error("malformed padding")]
    MalformedPadding,

    #[error("corrupt frame: {0}")]
    CorruptFrame(String),

    #[error("key order 2^{key_k} does not match frame k = {frame_k}")]
    KeyMismatch { key_k: u8, frame_k: u8 },

    #[error("expander parameters do not match the frame: {0}")]
    ExpanderMismatch(String),

    #[error("key file: {0}")]
    KeyFile(String),

    #[error("query budget exceeded: {0}")]
    BudgetExceeded(&'static str),

    #[error("decryption of the challenge ciphertext is not allowed")]
    ChallengeQuery,

    #[error("query restriction violated: {0}")]
    RestrictionViolated(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("partial Latin square has no completion")]
    Incompletable,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
