use thiserror::Error;

/// Errors raised by the forest model and the nca engines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NcaError {
    #[error("node {0} is not allocated")]
    UnknownNode(u32),
    #[error("nodes lie in different trees")]
    DifferentTrees,
    #[error("nodes already lie in the same tree")]
    SameTree,
    #[error("node {0} is not a root")]
    NotARoot(u32),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("argument must be nonzero")]
    ZeroArgument,
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, NcaError>;
