use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no root: {0}")]
    NoRoot(String),
    #[error("convergence failure: {0}")]
    Convergence(String),
    #[error("beam {0} lies inside a turning-point guard band")]
    Guarded(usize),
    #[error("usage: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::Domain(_) => 2,
            _ => 3,
        }
    }
}
