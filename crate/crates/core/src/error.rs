use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    UnknownVertex { vertex: usize, n: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("graph has {n} vertices, exceeds enumeration cap {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("{count} subsets to scan, exceeds cap {cap}")]
    TooManySubsets { count: u128, cap: u128 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("no valid reduction pair for vertex {0}")]
    NoValidPair(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
