use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{x} is not a unit modulo {q}")]
    NonUnit { x: i64, q: u64 },

    #[error("{x} is not invertible modulo {q}")]
    NonInvertible { x: i64, q: u64 },

    #[error("character of conductor {conductor} is not induced from modulus {target}")]
    NotReducible { conductor: u64, target: u64 },

    #[error("{what} needs {needed} entries, limit is {limit}")]
    ResourceLimit {
        what: &'static str,
        needed: u128,
        limit: u64,
    },

    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },

    #[error("division by exact zero")]
    DivisionByZero,
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        Error::UnsupportedRegime(msg.into())
    }

    /// Errors after which a dispatcher may try a different evaluation route.
    pub fn allows_fallback(&self) -> bool {
        matches!(self, Error::UnsupportedRegime(_) | Error::Precondition(_))
    }
}
