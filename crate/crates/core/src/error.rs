use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A request exceeds a configured memory or enumeration budget.
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    /// Argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("numerical error: {0}")]
    Numerical(String),
    #[error("parse error: {0}")]
    Parse(String),
    /// A claim whose denominator changes sign on its interval.
    #[error("ill-posed claim {id}: {reason}")]
    IllPosed { id: String, reason: String },
}
