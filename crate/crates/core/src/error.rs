use alloc::string::String;
use core::fmt;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation.
    Domain(String),
    /// An argument exceeds the range a table or sieve was built for.
    OutOfRange(String),
    /// A configured budget (memo entries, lattice visits) was exhausted.
    /// `partial` carries the count reached before giving up, when meaningful.
    Resource { what: String, partial: Option<u64> },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::OutOfRange(msg) => write!(f, "out of range: {msg}"),
            Error::Resource { what, partial: Some(p) } => {
                write!(f, "resource budget exceeded: {what} (partial count {p})")
            }
            Error::Resource { what, partial: None } => {
                write!(f, "resource budget exceeded: {what}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn out_of_range(msg: impl Into<String>) -> Error {
    Error::OutOfRange(msg.into())
}
