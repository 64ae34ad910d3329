use std::fmt;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is too small (need an odd prime >= 3)")]
    ModulusTooSmall(u64),
    #[error("{what} = {value} is out of range {range}")]
    OutOfRange {
        what: &'static str,
        value: i64,
        range: String,
    },
    #[error("enumeration needs {needed} terms, over the budget of {budget}; use the character method")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("{0} is not a unit modulo {1}")]
    NotAUnit(i64, u64),
    #[error("pole: {0}")]
    Pole(String),
    #[error("insufficient data: coefficient A{0} is not available")]
    InsufficientData(TupleDisplay),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("io error: {0}")]
    Io(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// A coefficient index printed as `(m1,m2,...)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleDisplay(pub Vec<u64>);

impl fmt::Display for TupleDisplay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, m) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, ")")
    }
}
