use thiserror::Error;

/// Everything that can go wrong inside the laboratory.
///
/// Variants map one-to-one onto the failure modes of the individual
/// operations; callers (notably the CLI) translate them into exit codes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid number specification: {0}")]
    InvalidSpec(String),

    #[error("parse error at position {position}: expected {expected}")]
    Parse { position: usize, expected: String },

    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("depth {requested} unavailable, expansion has {available} partial quotients")]
    DepthUnavailable { requested: usize, available: usize },

    #[error("index {0} is even, an odd index is required")]
    EvenIndex(usize),

    #[error("identity violated: {0}")]
    IdentityViolated(String),

    #[error("comparison for n = {n} undecidable at {bits} bits")]
    UndecidableAtPrecision { n: u64, bits: u32 },

    #[error("x is a multiple of 1/N, the comparison product vanishes")]
    ZeroProduct,

    #[error("zero factor at n = {n}")]
    ZeroFactor { n: i64 },

    #[error("no admissible point among {draws} candidates")]
    ExhaustedCandidates { draws: u64 },

    #[error("x is not admissible for the given parameters")]
    InadmissibleX,

    #[error("no scale l1 below l0 (M_l0 = {m_l0}, required M_l1 >= {required:.3})")]
    NoValidL1 { m_l0: String, required: f64 },

    #[error("invalid convergent pair c = {c}, M = {m}: gcd must be 1")]
    InvalidConvergent { c: String, m: String },

    #[error("duplicate points in configuration")]
    DuplicatePoints,

    #[error("configuration is not a (2,2) configuration")]
    NotTwoTwo,

    #[error("configuration is collinear")]
    DegenerateCollinear,

    #[error("zero of {symbol} on the orbit at offset {n}")]
    ZeroOnOrbit { n: i64, symbol: char },

    #[error("no admissible n' up to {n_max}")]
    SearchExhausted { n_max: u64 },

    #[error("good set is empty for the sampled grid")]
    EmptyGoodSet,

    #[error("|A| = |B|: the mean log-modulus integrand is singular")]
    EqualModuli,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
