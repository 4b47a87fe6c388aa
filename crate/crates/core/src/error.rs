use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("coefficient list is empty")]
    EmptyCoefficients,
    #[error("leading coefficient c_1 must be positive")]
    LeadingCoefficientZero,
    #[error("trailing coefficient c_L must be positive")]
    TrailingCoefficientZero,
    #[error("coefficient c_{index} = {value} is negative")]
    NegativeCoefficient { index: usize, value: i64 },
    #[error("coefficient c_{index} = {value} does not fit in 32 bits")]
    CoefficientTooLarge { index: usize, value: i64 },
    #[error("recurrence (1) is constant and has no unique decompositions")]
    DegenerateRecurrence,
    #[error("cannot parse coefficient list {0:?}")]
    InvalidCoefficientText(String),

    #[error("block size {t} is outside [0, {size})")]
    SizeOutOfRange { t: usize, size: u64 },
    #[error("input must be a positive integer")]
    NonPositiveInput,
    #[error("decomposition does not belong to this recurrence: {0}")]
    SpecMismatch(String),
    #[error("illegal decomposition at position {position}: {reason}")]
    IllegalDecomposition { position: usize, reason: String },
    #[error("decomposition has {found} block(s), at least 2 are required")]
    TooFewBlocks { found: usize },

    #[error("enumeration of {count} elements exceeds the cap of {cap}")]
    CapExceeded { count: String, cap: u64 },
    #[error("index n = {n} is too small, need n >= {min}")]
    IndexTooSmall { n: usize, min: usize },
    #[error("no element of Omega_{n} has second-to-last block size {t}")]
    EmptyConditionalEvent { n: usize, t: usize },
    #[error("distribution is empty")]
    EmptyDistribution,

    #[error("n_max = {n_max} is too small, need at least {min}")]
    WindowTooSmall { n_max: usize, min: usize },
    #[error("n = {n} is outside the computed range 1..={n_max}")]
    NotComputed { n: usize, n_max: usize },
    #[error("f({n}) is not tabulated")]
    MissingFValue { n: usize },
    #[error("no threshold N with Var[Y_n] above the bound on ({lower}, {n_max}]")]
    NoThresholdInRange { lower: usize, n_max: usize },
    #[error("candidate set for c is empty or has a non-positive minimum ({0})")]
    NonPositiveC(String),
    #[error("Var[K_{n}] = {variance} is below c*n = {bound}")]
    BoundViolated {
        n: usize,
        variance: String,
        bound: String,
    },
    #[error("Var[K_{n}] = 0")]
    DegenerateVariance { n: usize },
}
