use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid interval: t1 ({t1}) must be strictly less than t2 ({t2})")]
    InvalidInterval { t1: f64, t2: f64 },

    #[error("incompatible intervals")]
    IncompatibleIntervals,

    #[error("time {t} lies outside the interval [{t1}, {t2}]")]
    OutOfInterval { t: f64, t1: f64, t2: f64 },

    #[error("a sampled curve needs at least 2 samples, got {0}")]
    TooFewSamples(usize),

    #[error("non-finite value at index {0}")]
    NonFinite(usize),

    #[error("harmonic orders must be >= 1")]
    ZeroOrder,

    #[error("duplicate harmonic order {0}")]
    DuplicateOrder(u32),

    #[error("n_max must be at least 1")]
    ZeroNmax,

    #[error("harmonic order {order} exceeds n_max {n_max}")]
    OrderAboveNmax { order: u32, n_max: u32 },

    #[error("insufficient samples for order n_max: {samples} samples, order {n_max} needs at least {required}")]
    InsufficientSamples {
        samples: usize,
        n_max: u32,
        required: usize,
    },

    #[error("invalid price-frequency function: {0}")]
    InvalidPriceFunction(String),

    #[error("frequency {0} is negative")]
    NegativeFrequency(f64),

    #[error("logarithm argument {0} is not positive")]
    LogDomain(f64),

    #[error("invalid tariff: {0}")]
    InvalidTariff(String),

    #[error("gross energy must be positive, got {0}")]
    NonPositiveEnergy(f64),

    #[error("underdetermined: {observations} observations for {unknowns} unknowns")]
    Underdetermined { observations: usize, unknowns: usize },

    #[error("degenerate observation set: design matrix rank {rank} < {unknowns}")]
    DegenerateObservations { rank: usize, unknowns: usize },

    #[error("pricing scale must be positive, got {0}")]
    NonPositiveScale(f64),

    #[error("cost characteristic has {got} entries, expected {expected}")]
    IndexingMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
