use thiserror::Error;

/// Errors surfaced by parsing, module construction and the engines.
///
/// `PropertyFalsified` is special: it reports that a structural property the
/// engines rely on failed on a concrete input. It is never "repaired"; the
/// witness is passed through so the caller can reproduce it.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),

    #[error("module expression: {0}")]
    Expr(String),

    #[error("window insufficient: {0}")]
    Window(String),

    #[error("truncation orientation violation: {0}")]
    Orientation(String),

    #[error("invalid complex at position {position} ({place}): {msg}")]
    InvalidComplex {
        position: i64,
        place: String,
        msg: String,
    },

    #[error("property falsified: {property} on {witness}")]
    PropertyFalsified { property: String, witness: String },

    #[error("{0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    /// CLI exit code classification: 1 = property falsified, 2 = input error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::PropertyFalsified { .. } => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
