use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("extension degree {0} outside supported range 1..=8")]
    DegreeOutOfRange(u32),
    #[error("GF({0}^{1}) exceeds the supported field order 4096")]
    FieldTooLarge(u64, u32),
    #[error("division by zero in GF({q})")]
    DivisionByZero { q: u32 },
    #[error("invalid level profile: {0}")]
    InvalidProfile(String),
    #[error("row {row}, column {column}: symbol {symbol} outside 0..{levels}")]
    SymbolOutOfRange { row: usize, column: usize, symbol: u32, levels: u32 },
    #[error("column index {index} out of range for {columns} columns")]
    ColumnOutOfRange { index: usize, columns: usize },
    #[error("strength {t} exceeds the {k} available columns")]
    StrengthTooLarge { t: usize, k: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("mismatched inputs: {0}")]
    Mismatch(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("order {v} is not covered by built-in constructions; supply a difference matrix with --dm-file")]
    NotCovered { v: u64 },
    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },
    #[error("in {node}: {source}")]
    AtNode { node: String, source: Box<Error> },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// The innermost error, skipping node context.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtNode { source, .. } => source.root(),
            other => other,
        }
    }

    pub(crate) fn parse_value(text: &str) -> Error {
        Error::Parse { line: 0, message: format!("cannot parse `{text}`") }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Error {
        Error::Parse { line, message: message.into() }
    }
}
