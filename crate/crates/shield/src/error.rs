//! Error plumbing for the IO/CLI layer.

use std::fmt;

#[derive(Debug)]
pub enum Error {
    /// Propagated from the algorithmic core.
    Core(graphshield_core::Error),
    Io(std::io::Error),
    /// A file's contents did not match its declared format.
    Format(String),
    /// A configuration value failed validation.
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Core(e) => write!(f, "{e}"),
            Error::Io(e) => write!(f, "{e}"),
            Error::Format(m) => write!(f, "malformed input: {m}"),
            Error::Config(m) => write!(f, "invalid configuration: {m}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<graphshield_core::Error> for Error {
    fn from(e: graphshield_core::Error) -> Self {
        Error::Core(e)
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}
