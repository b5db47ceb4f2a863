use thiserror::Error;

/// Errors of the command-line layer. Everything here maps to exit code 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: syntax error at line {line}, column {column}: {message}")]
    Syntax { path: String, line: usize, column: usize, message: String },
    #[error("{path}: field `{field}`: {message}")]
    Field { path: String, field: String, message: String },
    #[error(transparent)]
    Core(#[from] convex_core::Error),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("unknown suite `{0}` (expected one of laws, algebra, lawvere, coefficient-change, roundtrip)")]
    UnknownSuite(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}
