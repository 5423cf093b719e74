use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("prime p = {0} is not supported (only p >= 5)")]
    UnsupportedPrime(u64),

    /// The weight fails Kummer's hypothesis: `p - 1` divides `l + 1`.
    #[error("Kummer hypothesis violated: l = {l} is congruent to -1 mod p - 1 = {}", .p - 1)]
    KummerHypothesis { p: u64, l: u64 },

    #[error("eta offsets differ ({left} vs {right}); normalize before adding")]
    OffsetMismatch { left: String, right: String },

    #[error("lattice: {0}")]
    Lattice(String),

    #[error("requested precision {requested} exceeds the cost bound {bound}")]
    CostBound { requested: usize, bound: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("p-adic limit did not stabilize: {0}")]
    NoConvergence(String),
}
