use thiserror::Error;

/// Errors raised by constructors and operations in this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid modulus {modulus}: {reason}")]
    InvalidModulus { modulus: u64, reason: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },

    #[error("domain violation at x={x}: {reason}")]
    DomainViolation { x: u64, reason: String },

    #[error("bound violation ({bound}): observed {observed}, allowed {allowed}")]
    BoundViolation {
        bound: String,
        observed: f64,
        allowed: f64,
    },

    #[error("empty sample")]
    EmptySample,

    #[error("malformed trace function container: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid_modulus(modulus: u64, reason: impl Into<String>) -> Self {
        Error::InvalidModulus {
            modulus,
            reason: reason.into(),
        }
    }

    /// True for errors that signal a resource or cost guard rather than bad input.
    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::Capacity(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
