use thiserror::Error;

/// Every failure the library can report.
///
/// Variants carry a rendered term (or a short description) rather than the
/// term itself so that errors stay cheap to clone and print.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at column {col}: {msg}")]
    Syntax { col: usize, msg: String },
    #[error("invalid term: {0}")]
    InvalidTerm(String),
    #[error("unfolding exceeds budget: {0}")]
    TooDeep(String),
    #[error("not a principal θ̃-term: {0}")]
    NotPrincipal(String),
    #[error("argument must be nonzero")]
    ZeroArg,
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("finite function is not special: {0}")]
    NotSpecial(String),
    #[error("cut point {0} is not below the top key")]
    BadCut(String),
    #[error("finite function is not irreducible: {0}")]
    NotIrreducible(String),
    #[error("no attribute {attr} for {term}")]
    NoAttribute { attr: &'static str, term: String },
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("not a collapse point: {0}")]
    BadRho(String),
    #[error("term outside the collapse domain: {0}")]
    OutOfDomain(String),
    #[error("term not in the collapse image: {0}")]
    NotInImage(String),
    #[error("descent fuel exhausted after {0} steps")]
    FuelExhausted(u64),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Short machine-readable tag, used by the CLI's jsonl output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "syntax",
            Error::InvalidTerm(_) => "invalid-term",
            Error::TooDeep(_) => "too-deep",
            Error::NotPrincipal(_) => "not-principal",
            Error::ZeroArg => "zero-arg",
            Error::ArityMismatch { .. } => "arity-mismatch",
            Error::NotSpecial(_) => "not-special",
            Error::BadCut(_) => "bad-cut",
            Error::NotIrreducible(_) => "not-irreducible",
            Error::NoAttribute { .. } => "no-attribute",
            Error::BudgetExceeded(_) => "budget-exceeded",
            Error::BadRho(_) => "bad-rho",
            Error::OutOfDomain(_) => "out-of-domain",
            Error::NotInImage(_) => "not-in-image",
            Error::FuelExhausted(_) => "fuel-exhausted",
        }
    }
}
