use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("universe size must be between 1 and 255, got {0}")]
    InvalidUniverse(usize),

    #[error("universe mismatch: expected {expected} elements, found {found}")]
    UniverseMismatch { expected: usize, found: usize },

    #[error("arity must be at least 1")]
    ZeroArity,

    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("index {index} out of range 1..={arity}")]
    IndexOutOfRange { index: usize, arity: usize },

    #[error("element {value} is outside the universe of size {universe}")]
    ElementOutOfRange { value: usize, universe: usize },

    #[error("field `{field}`: expected length {expected}, found {found}")]
    LengthMismatch {
        field: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("expected {expected} inner operations, found {found}")]
    WrongOperandCount { expected: usize, found: usize },

    #[error("matrix has {found} rows, expected {expected}")]
    RowMismatch { expected: usize, found: usize },

    #[error("window [{start}, {end}) exceeds the {cols} columns of the matrix")]
    WindowOutOfRange { start: usize, end: usize, cols: usize },

    #[error("matrix with {cols} columns exceeds breadth bound {bound}")]
    BreadthExceeded { cols: usize, bound: usize },

    #[error("empty family: {0}")]
    EmptyFamily(&'static str),

    #[error("malformed scheme: {0}")]
    MalformedScheme(String),

    #[error("malformed parameters: {0}")]
    MalformedParams(String),

    #[error("malformed term: {0}")]
    MalformedTerm(String),

    #[error("{what} needs {needed} steps, which exceeds the cap of {cap}")]
    CapExceeded {
        what: &'static str,
        needed: u128,
        cap: u128,
    },

    #[error("invalid input in field `{field}`: {reason}")]
    InvalidInput { field: String, reason: String },

    #[error("json: {0}")]
    Json(String),
}

impl Error {
    /// True for errors caused by a configured enumeration cap rather than bad input.
    pub fn is_cap(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }

    pub(crate) fn cap(what: &'static str, needed: u128, cap: u64) -> Self {
        Error::CapExceeded {
            what,
            needed,
            cap: cap as u128,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Json(err.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
