use lakefca_core::{ContextError, LatticeError};

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("malformed CXT header: {0}")]
    MalformedHeader(String),
    #[error("{what}: expected {expected}, found {found}")]
    CountMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: bad cell {cell:?}")]
    BadCell { line: usize, cell: String },
    #[error("line {line}: expected {expected} cells, found {found}")]
    RaggedRow { line: usize, expected: usize, found: usize },
    #[error("name {0:?} cannot be written in this format")]
    UnrepresentableName(String),
    #[error("document has no \"properties\" mapping")]
    NotAMapping,
    #[error("mapping of {0:?} has no properties")]
    EmptyProperties(String),
    #[error("structure {0:?} has no fields")]
    EmptyFields(String),
    #[error("measurement #{0} has no name")]
    MissingName(usize),
    #[error("measurement {0:?} declared twice")]
    DuplicateMeasurement(String),
    #[error("duplicate structure name {0:?}")]
    DuplicateName(String),
    #[error(transparent)]
    Context(#[from] ContextError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Non-fatal findings while reading schema sources.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IngestWarning {
    /// A mapping key contains `.` so its flattened path may collide.
    DottedKey {
        structure: String,
        key: String,
    },
    EmptyProperties {
        structure: String,
    },
    EmptyFields {
        structure: String,
    },
}

impl std::fmt::Display for IngestWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IngestWarning::DottedKey { structure, key } => {
                write!(f, "{structure}: key {key:?} contains '.', flattened names may collide")
            }
            IngestWarning::EmptyProperties { structure } => write!(f, "{structure}: mapping has no properties"),
            IngestWarning::EmptyFields { structure } => write!(f, "{structure}: no fields"),
        }
    }
}

/// Errors a command can end with, each mapped to an exit code.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("{0}")]
    Usage(String),
    #[error("unsupported format {0:?}")]
    UnsupportedFormat(String),
    #[error("op {index} rejected: {reason}")]
    Rejected { index: usize, reason: String },
    #[error(transparent)]
    Session(#[from] crate::session::SessionError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Lattice(LatticeError::ResourceLimitExceeded { .. })
            | Error::Session(crate::session::SessionError::Lattice(LatticeError::ResourceLimitExceeded { .. })) => 3,
            _ => 2,
        }
    }
}
