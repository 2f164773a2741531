use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("gamma function pole at z = {0}")]
    Pole(f64),
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("invalid parameters: {0}")]
    InvalidParameter(String),
    #[error("quadrature did not converge: {0}")]
    Convergence(String),
    #[error("truncation could not be certified: {0}")]
    Truncation(String),
    #[error("matrix is numerically singular: {0}")]
    Singular(String),
    #[error("eigenvalues are degenerate: {0}")]
    Degenerate(String),
    #[error("eigensolver failure: {0}")]
    Eigensolver(String),
    #[error("problem size not supported: {0}")]
    Size(String),
    #[error("replica {replica}: {source}")]
    Replica {
        replica: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization failure: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
