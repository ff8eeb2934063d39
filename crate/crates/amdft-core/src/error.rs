use alloc::string::String;

/// Errors reported by the core library.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// The caller passed a value outside the documented domain.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// The request is well formed but no module or algorithm covers it.
    #[error("unsupported: {0}")]
    Capability(String),
    /// An internal structure check failed (plan, module or document mismatch).
    #[error("consistency check failed: {0}")]
    Consistency(String),
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! invalid {
    ($($arg:tt)*) => { $crate::error::Error::InvalidInput(alloc::format!($($arg)*)) };
}
macro_rules! capability {
    ($($arg:tt)*) => { $crate::error::Error::Capability(alloc::format!($($arg)*)) };
}
macro_rules! consistency {
    ($($arg:tt)*) => { $crate::error::Error::Consistency(alloc::format!($($arg)*)) };
}
pub(crate) use {capability, consistency, invalid};
