use thiserror::Error;

/// Errors raised by the workbench. Axiom failures are not errors: they are
/// reported through [`crate::report::AxiomReport`].
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("non-homogeneous input: {0}")]
    Homogeneity(String),

    #[error("degree mismatch: {0}")]
    Degree(String),

    #[error("space mismatch: {0}")]
    SpaceMismatch(String),

    #[error("duplicate basis symbol `{0}`")]
    DuplicateSymbol(String),

    #[error("unknown basis symbol `{0}`")]
    UnknownSymbol(String),

    #[error("unknown basis symbol `{symbol}` in {field} entry {index}")]
    UnknownSymbolAt {
        symbol: String,
        field: String,
        index: usize,
    },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("missing data: {0}")]
    Missing(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("schema violation: {0}")]
    Schema(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
