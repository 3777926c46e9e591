use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("probability vector is empty")]
    EmptyVector,

    #[error("probabilities sum to {0}, expected 1 within 1e-12")]
    NotNormalized(f64),

    #[error("invalid probability {value} at index {index}")]
    InvalidProbability { index: usize, value: f64 },

    #[error("cross entropy is infinite: q[{index}] = 0 while p[{index}] > 0")]
    InfiniteCrossEntropy { index: usize },

    #[error("q has {q_len} entries but p needs {p_len}")]
    PrefixTooShort { p_len: usize, q_len: usize },

    #[error("count vector has no positive entries")]
    NoObservations,

    #[error("negative count {value} at index {index}")]
    NegativeCount { index: usize, value: i64 },

    #[error("invalid Pitman-Yor parameters (d = {d}, alpha = {alpha}): need 0 <= d < 1 and alpha > -d")]
    InvalidParams { d: f64, alpha: f64 },

    #[error("pmf index must be >= 1, got {0}")]
    InvalidIndex(i64),

    #[error("truncation index {0} is below 10; the tail approximation is not valid there")]
    TruncationTooSmall(usize),

    #[error("mass tolerance {0} must lie in (0, 1)")]
    InvalidMassTolerance(f64),

    #[error("stick-breaking hit the cap of {cap} sticks with residual mass {residual}")]
    StickCapReached { cap: usize, residual: f64 },

    #[error("N + alpha = {0} is not positive")]
    NonPositiveNormalizer(f64),

    #[error("upper bound undefined: alpha + T d = {0} <= 0")]
    UpperBoundUndefined(f64),

    #[error("negative discriminant {0} in boundary candidate")]
    NegativeDiscriminant(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
