use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("exponent {0} is outside the value group")]
    NonIntegralExponent(String),

    #[error("zero has no angular component")]
    ZeroInput,

    #[error("residue undefined: element has negative valuation {0}")]
    NegativeValuation(String),

    #[error("truncation exhausted: need order {needed}, have {available}")]
    TruncationExhausted { needed: usize, available: usize },

    #[error("no value for variable x{var}^({order})")]
    MissingVariable { var: usize, order: usize },

    #[error("backend mismatch: {0} vs {1}")]
    BackendMismatch(String, String),

    #[error("invalid radius rule: {0}")]
    InvalidRule(String),

    #[error("bad base {0}: must be a rational > 1")]
    BadBase(String),

    #[error("radius is undefined over a trivially valued field")]
    TrivialBackend,

    #[error("window start {start} is not below truncation {truncation}")]
    BadWindow { start: usize, truncation: usize },

    #[error("not a classical solution: residual nonzero at degree {0}")]
    NotAClassicalSolution(usize),

    #[error("syntax error at {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("zeta is only available over an Eisenstein backend")]
    ZetaUnavailable,

    #[error("unknown variable {0}")]
    UnknownVariable(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error("internal check failed: {0}")]
    Internal(String),
}
