use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("degenerate curve: {0}")]
    DegenerateCurve(String),
    #[error("singular curve: {0}")]
    SingularCurve(String),
    #[error("bad prime {p}: {reason}")]
    BadPrime { p: u64, reason: String },
    #[error("unsupported prime {0}")]
    UnsupportedPrime(u64),
    #[error("insufficient primes: {tested} usable, at least {required} required")]
    InsufficientPrimes { tested: usize, required: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
