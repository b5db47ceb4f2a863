use alloc::string::String;

/// Errors raised by constructors and operations of this crate.
///
/// Law checkers never return these for law violations; violations are
/// collected into a [`LawReport`](crate::kernel::LawReport).
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation (foreign
    /// element, empty input, dimension mismatch).
    #[error("domain error: {0}")]
    Domain(String),
    /// A value failed a structural invariant (weights not summing to one,
    /// semilattice axiom violated, ...).
    #[error("validation error: {0}")]
    Validation(String),
    /// The input is well formed but larger than this implementation handles.
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! domain {
    ($($arg:tt)*) => { $crate::error::Error::Domain(alloc::format!($($arg)*)) };
}
macro_rules! validation {
    ($($arg:tt)*) => { $crate::error::Error::Validation(alloc::format!($($arg)*)) };
}
pub(crate) use domain;
pub(crate) use validation;
