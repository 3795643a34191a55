use thiserror::Error;

/// Errors raised by the laboratory. Variants that a caller is expected to act
/// on (raise a bound, choose another prime, pass to an extension) carry enough
/// context to do so.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("subscheme is not invariant: {0}")]
    InvarianceViolated(String),

    #[error("a field extension is required: {0}")]
    ExtensionRequired(String),

    #[error("no root in the base field: {0}")]
    NoRootInField(String),

    #[error("p-adic precision exhausted: {0}")]
    PrecisionLoss(String),

    #[error("search exhausted: {0}")]
    SearchExhausted(String),

    #[error("truncation tail dominates the stored terms (raise the truncation degree): {0}")]
    TailDominates(String),

    #[error("not divisible: {0}")]
    NotDivisible(String),

    #[error("bad reduction: {0}")]
    BadReduction(String),

    #[error("construction failed: {0}")]
    ConstructionFailed(String),

    #[error("singular matrix")]
    SingularMatrix,

    #[error("polynomial is not monic")]
    NonMonic,

    #[error("division by zero")]
    DivisionByZero,
}

pub type Result<T> = std::result::Result<T, Error>;
