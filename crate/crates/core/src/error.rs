use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("constant polynomial has no threshold")]
    ConstantPolynomial,
    #[error("empty factor list")]
    EmptyFactorList,
    #[error("duplicate factor {0}")]
    DuplicateFactor(String),
    #[error("factor {0} is not primitive (content {1})")]
    NonPrimitive(String, String),
    #[error("factor {factor} is reducible: rational root {root}")]
    RationalRoot { factor: String, root: String },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("scale exceeded: {0}")]
    ScaleExceeded(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
}

pub type Result<T> = std::result::Result<T, Error>;
