use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid rational {text:?}: {reason}")]
    Rational { text: String, reason: String },
    #[error("invalid budget family: {0}")]
    Family(String),
    #[error("price must be strictly positive (budget {budget}, good {good})")]
    NonPositivePrice { budget: usize, good: usize },
    #[error("budgets {first} and {second} have identical price vectors")]
    DuplicatePrices { first: usize, second: usize },
    #[error("invalid stochastic demand: {0}")]
    Demand(String),
    #[error("invalid behavioral type: {0}")]
    BehavioralType(String),
    #[error("type enumeration needs {product} types, above the cap of {cap}")]
    EnumerationCap { product: u128, cap: u128 },
    #[error("exchange repair refused: every input type lies in the class of {subfamily}")]
    SharedClass { subfamily: String },
    #[error("invalid problem field `{field}`: {reason}")]
    Problem { field: String, reason: String },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
