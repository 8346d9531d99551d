use thiserror::Error;

/// Crate-wide error type. Variants map onto the CLI exit-code categories:
/// argument errors are usage problems, ingest/format errors are data
/// problems, shape and numerical errors abort a computation.
#[derive(Debug, Error)]
pub enum Error {
    /// A dataset or file could not be ingested (missing file, bad magic).
    #[error("ingest error: {0}")]
    Ingest(String),
    /// A file was read but its contents violate the expected format.
    #[error("format error: {0}")]
    Format(String),
    /// A caller-supplied argument is out of contract.
    #[error("invalid argument: {0}")]
    Argument(String),
    /// Two operands have incompatible shapes; both shapes are named.
    #[error("shape mismatch: {0}")]
    Shape(String),
    /// A numerical procedure failed (non-convergence, NaN/Inf).
    #[error("numerical error: {0}")]
    Numerical(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
