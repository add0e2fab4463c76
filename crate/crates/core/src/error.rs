//! Error types shared across the crate.

use thiserror::Error;

/// Errors raised by exact-arithmetic kernel operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("denominator vanishes under the substitution")]
    DenominatorVanishes,
    #[error("precision loss: denominator magnitude below certification threshold")]
    PrecisionLoss,
    #[error("division by zero")]
    DivisionByZero,
}

/// Errors raised while parsing equation text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {msg}")]
    SyntaxError { pos: usize, msg: String },
    #[error("unknown symbol `{name}` at position {pos}")]
    UnknownSymbol { name: String, pos: usize },
}

/// Errors raised while converting an AST into tower form.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrontendError {
    #[error("radicand contains a derivative of the unknown")]
    UnsupportedRadicand,
    #[error("equation is not polynomial in the unknown and its derivatives: {0}")]
    NonPolynomial(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Tower(#[from] TowerError),
}

/// Errors raised by tower analysis.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TowerError {
    #[error("degenerate tower: step `{step}` contributes degree 1 and should have been simplified away")]
    DegenerateTower { step: String },
    #[error("zero divisor encountered in tower arithmetic (tower step is reducible)")]
    ZeroDivisor,
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// Errors raised by the change-of-variables machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("Jacobian of the substitution is identically singular")]
    SingularJacobian,
    #[error("substitution component missing for `{0}`")]
    MissingComponent(String),
    #[error("parametrization rejected: {0}")]
    InvalidParametrization(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Tower(#[from] TowerError),
}

/// Errors raised during inversion of a parametrization.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvertError {
    #[error("parametrization is not proper: gcd has degree {degree} in the parameter")]
    NotProper { degree: usize },
    #[error("could not solve for parameter `{0}`")]
    Unsolved(String),
}

/// Errors raised by numeric branch resolution.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("branch ambiguous: two candidate roots are not separated at the working precision")]
    BranchAmbiguous,
    #[error("no admissible sample point found within the retry budget")]
    SampleBudgetExhausted,
    #[error(transparent)]
    Kernel(#[from] KernelError),
}
