use thiserror::Error;

/// Errors produced by the group, arithmetic and digraph routines.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed cycle notation: {0}")]
    MalformedCycle(String),

    #[error("point {point} out of range for degree {degree}")]
    OutOfRange { point: usize, degree: usize },

    #[error("incompatible degrees {left} and {right}")]
    IncompatibleDegree { left: usize, right: usize },

    #[error("images do not form a permutation: {0}")]
    NotBijection(String),

    #[error("empty generator list")]
    EmptyGenerators,

    #[error("repeated point {0}")]
    RepeatedPoint(usize),

    #[error("{what} exceeds cap {cap}")]
    Capacity { what: String, cap: u64 },

    #[error("group is not transitive")]
    NotTransitive,

    #[error("not a subgroup: {0}")]
    NotSubgroup(String),

    #[error("invalid parameters: {0}")]
    Parameter(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("input must be positive")]
    Zero,

    #[error("mismatched primes {0} and {1}")]
    PrimeMismatch(u64, u64),

    #[error("degenerate valency {0}")]
    DegenerateValency(usize),

    #[error("catalog: {0}")]
    Catalog(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn capacity(what: impl Into<String>, cap: u64) -> Error {
    Error::Capacity {
        what: what.into(),
        cap,
    }
}
