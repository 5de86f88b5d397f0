use thiserror::Error;

/// Errors raised by the scalar rings, the exterior algebra and the coframe calculus.
///
/// Failing geometric conditions are never errors; they are verdicts in the
/// corresponding report types.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("mixed backends: {0}")]
    MixedBackend(String),
    #[error("cannot combine sqrt({0}) with sqrt({1})")]
    MixedRadicand(u32, u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not invertible in this ring")]
    NotInvertible(String),
    #[error("jet derivative requested beyond its order")]
    JetOrderExceeded,
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("evaluation error: {0}")]
    Eval(String),
    #[error("wedge of degrees {0} and {1} exceeds dimension 6")]
    DegreeOverflow(usize, usize),
    #[error("expected a form of degree {expected}, got degree {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("volume form is zero")]
    ZeroVolume,
    #[error("3-form is not stable with lambda < 0 (lambda = {0})")]
    NotStable(f64),
    #[error("structure equations fail d^2 = 0 on {form}: residual {residual}")]
    JacobiFailure { form: String, residual: String },
    #[error("invalid structure equations: {0}")]
    InvalidStructure(String),
    #[error("parity constraints are inconsistent at order <= 1")]
    InconsistentParity,
    #[error("equation is not linear in the coefficient functions: {0}")]
    NonLinear(String),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("unknown case `{0}`")]
    UnknownCase(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
