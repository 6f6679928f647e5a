use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("function vanishes on part of the grid (t = {0:e})")]
    DegenerateFunction(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("condition n-1 < sum 1/p violated (n = {n}, sum 1/p = {sum_inv_p})")]
    ConditionViolated { n: usize, sum_inv_p: f64 },
    #[error("exponent out of range: need 1 < q <= p < inf, got q = {q}, p = {p}")]
    ExponentOutOfRange { q: f64, p: f64 },
    #[error("theta = {theta} is not above 1 - 1/p = {threshold}")]
    InfeasibleTheta { theta: f64, threshold: f64 },
    #[error("(aInc)_1 fails: phi(s)/s = {left:e} > phi(t)/t = {right:e} at s = {s:e}, t = {t:e}")]
    NotAInc1 {
        s: f64,
        t: f64,
        left: f64,
        right: f64,
    },
    #[error("exponent order violated: need p0 < q <= p < p1, got p0 = {p0}, q = {q}, p = {p}, p1 = {p1}")]
    ExponentOrderViolated { p0: f64, q: f64, p: f64, p1: f64 },
    #[error("modular is infinite for every scale tried")]
    Unbounded,
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("dilation parameter must be nonzero")]
    ZeroDilation,
    #[error("input does not decay at the grid boundary (relative boundary mass {0:e})")]
    BoundaryDecayViolated(f64),
    #[error("constraint violated: {0}")]
    ConstraintViolated(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
