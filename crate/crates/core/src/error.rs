use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Two objects that must share a degree (or a component list) do not.
    DegreeMismatch { expected: usize, found: usize },
    /// A state, index or coordinate outside `1..=bound`.
    OutOfRange { value: usize, bound: usize },
    /// Any other malformed input.
    Invalid(String),
    /// A configured size cap was hit.
    CapExceeded { what: &'static str, cap: usize },
    /// An internal consistency check failed.
    Inconsistent(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    /// `true` for errors caused by a size cap rather than by the input itself.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DegreeMismatch { expected, found } => {
                write!(f, "degree mismatch: expected {expected}, found {found}")
            }
            Error::OutOfRange { value, bound } => {
                write!(f, "value {value} out of range 1..={bound}")
            }
            Error::Invalid(msg) => f.write_str(msg),
            Error::CapExceeded { what, cap } => {
                write!(f, "{what} exceeds the configured cap of {cap}")
            }
            Error::Inconsistent(msg) => write!(f, "internal consistency error: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
