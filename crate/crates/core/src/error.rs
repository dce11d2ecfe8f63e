use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Roots of some factor live further up the extension tower than allowed.
    #[error("extension overflow: {0}")]
    ExtensionOverflow(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("point is not on the conic")]
    NotOnConic,

    #[error("no rational point found on {0}; supply a base point")]
    NeedsHint(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// An internal invariant failed. Seeing this means a bug.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// A stable machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::FieldMismatch(..) => "field_mismatch",
            Error::DivisionByZero => "division_by_zero",
            Error::Unsupported(_) => "unsupported",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::ExtensionOverflow(_) => "extension_overflow",
            Error::Degenerate(_) => "degenerate",
            Error::NotOnConic => "not_on_conic",
            Error::NeedsHint(_) => "needs_hint",
            Error::Parse(_) => "parse",
            Error::Invariant(_) => "invariant",
        }
    }
}
