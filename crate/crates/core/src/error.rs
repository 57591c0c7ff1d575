use thiserror::Error;

/// Every failure the library reports.
#[derive(Debug, Error)]
pub enum Error {
    #[error("a recurrence needs at least one coefficient")]
    EmptyCoefficients,
    #[error("c_1 must be ≥ 1")]
    LeadingCoefficientZero,
    #[error("c_L must be ≥ 1")]
    TrailingCoefficientZero,
    #[error("coefficient c_{index} = {value} is negative")]
    NegativeCoefficient { index: usize, value: i64 },
    #[error("coefficient c_{index} = {value} does not fit in 32 bits")]
    CoefficientTooLarge { index: usize, value: i64 },
    #[error("the recurrence (1) generates the constant sequence 1, 1, 1, ... and has no root above 1")]
    ConstantSequence,
    #[error("cannot parse coefficient list {input:?}: {reason}")]
    ParseCoefficients { input: String, reason: String },
    #[error("M must be ≥ 1")]
    NonPositiveInteger,
    #[error("gap recurrence requires all c_i > 0")]
    NotAllPositive,
    #[error("gap size {g} exceeds the cap of {cap}")]
    GapTooLarge { g: usize, cap: usize },
    #[error("index n = {n} is out of range: {reason}")]
    IndexOutOfRange { n: usize, reason: &'static str },
    #[error("interval [G_{n}, G_{{n+1}}) holds {size} integers, over the enumeration budget of {budget}")]
    BudgetExceeded { n: usize, size: String, budget: u64 },
    #[error("need at least {needed} terms, got {got}")]
    TooFewTerms { needed: usize, got: usize },
    #[error("root finding stalled with |T(λ)| = {residual:e}")]
    RootNotConverged { residual: f64 },
    #[error("table polynomial does not vanish at λ₁: |T(λ₁)| = {residual:e}")]
    RootMismatch { residual: f64 },
    #[error("invalid coefficient table: {0}")]
    InvalidTable(String),
    #[error("need {needed} consecutive seed rows before n = {next}, got {got}")]
    InsufficientSeeds { needed: usize, got: usize, next: usize },
    #[error("row {n} is not stored")]
    MissingRow { n: usize },
    #[error("evolution produced a negative entry at n = {n}, k = {k}")]
    NegativeEntry { n: usize, k: usize },
    #[error("row {n} sums to zero")]
    DegenerateRow { n: usize },
    #[error("variance vanishes at n = {n}")]
    DegenerateVariance { n: usize },
    #[error("fit window needs at least {needed} points, got {got}")]
    WindowTooShort { needed: usize, got: usize },
    #[error("moment order must be even, got {0}")]
    OddMomentOrder(usize),
    #[error("recursive moments diverged from direct ones by {deviation:e} at n = {n}, m = {m}")]
    MomentDivergence { n: usize, m: usize, deviation: f64 },
    #[error("malformed record: {0}")]
    Format(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
