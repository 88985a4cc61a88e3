use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse classification of errors, used by front ends to choose exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    Validation,
    NotFound,
    CategoryMismatch,
    Io,
}

impl ErrorCategory {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCategory::Validation => "validation",
            ErrorCategory::NotFound => "not-found",
            ErrorCategory::CategoryMismatch => "category-mismatch",
            ErrorCategory::Io => "io",
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension {0}: hypervectors need at least one sample")]
    InvalidDimension(usize),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("non-finite value for {0}")]
    NonFinite(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("cannot superpose an empty list of hypervectors")]
    EmptySuperposition,

    #[error(
        "bases {first} and {second} of domain `{domain}` are not quasi-orthogonal \
         (|similarity| = {similarity:.4} >= {threshold:.4}); raise the dimension or change the seed"
    )]
    NotOrthogonal {
        domain: String,
        first: String,
        second: String,
        similarity: f64,
        threshold: f64,
    },

    #[error("domain `{domain}` has {expected} dimensions but {got} coordinates were given")]
    CoordinateCount {
        domain: String,
        expected: usize,
        got: usize,
    },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("search space of {size} combinations exceeds the brute-force cap of {cap}; use the resonator")]
    SearchSpaceTooLarge { size: u128, cap: u64 },

    #[error("unknown domain `{0}`")]
    UnknownDomain(String),

    #[error("domain `{0}` is already registered")]
    DuplicateDomain(String),

    #[error("concept `{label}` already exists in domain `{domain}` (pass overwrite to replace it)")]
    DuplicateLabel { label: String, domain: String },

    #[error("concept `{0}` not found")]
    ConceptNotFound(String),

    #[error("domain `{0}` holds no concepts")]
    EmptyDomain(String),

    #[error("no domains are registered")]
    NoDomains,

    #[error("category mismatch: {0}")]
    CategoryMismatch(String),

    #[error("concept `{label}` has no projection in the salient domain `{domain}`")]
    MissingProjection { label: String, domain: String },

    #[error("unsupported store version {found} (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },

    #[error("malformed store file {}: {message} (line {line}, column {column})", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("store file {} not found", .0.display())]
    StoreNotFound(PathBuf),

    #[error("i/o error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::UnknownDomain(_)
            | Error::ConceptNotFound(_)
            | Error::EmptyDomain(_)
            | Error::NoDomains
            | Error::StoreNotFound(_) => ErrorCategory::NotFound,
            Error::CategoryMismatch(_) | Error::MissingProjection { .. } => {
                ErrorCategory::CategoryMismatch
            }
            Error::Io { .. } | Error::Parse { .. } | Error::VersionMismatch { .. } => {
                ErrorCategory::Io
            }
            _ => ErrorCategory::Validation,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
