use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("weight vector is empty")]
    EmptyVector,
    #[error("weight {value} at index {index} is negative")]
    NegativeWeight { index: usize, value: f64 },
    #[error("weight at index {index} is not finite")]
    NonFiniteWeight { index: usize },
    #[error("weights sum to {sum}, outside tolerance of 1")]
    SumOutOfTolerance { sum: f64 },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("P is not absolutely continuous w.r.t. Q at index {index}")]
    NotAbsolutelyContinuous { index: usize },
    #[error("mean {mean} outside [{a}, {b}]")]
    MeanOutOfRange { a: f64, b: f64, mean: f64 },
    #[error("degenerate interval [{0}, {0}]")]
    DegenerateInterval(f64),
    #[error("invalid order alpha = {0}; need alpha in (0,1) or (1,inf)")]
    InvalidAlpha(f64),
    #[error("generator fails f(1) = 0: f(1) = {0}")]
    FailsAnchorCheck(f64),
    #[error("generator fails convexity sample at s = {s}, u = {u}")]
    FailsConvexitySample { s: f64, u: f64 },
    #[error("invalid generator limit: {0}")]
    InvalidLimit(&'static str),
    #[error("log argument {0} is not positive")]
    LogDomain(f64),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("class A(delta={delta}, m={m}, M={big_m}) is empty")]
    Infeasible { delta: f64, m: f64, big_m: String },
    #[error("M = inf is outside this formula's hypotheses")]
    UnboundedM,
    #[error("undefined extended-real operation: {0}")]
    UndefinedArithmetic(&'static str),
    #[error("NaN is not a valid value")]
    NotANumber,
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
}
