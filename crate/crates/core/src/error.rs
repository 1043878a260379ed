use thiserror::Error;

use crate::sequent::Name;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("unknown vertex name {0}")]
    UnknownName(Name),
    #[error("invalid logic {0:?}: expected a subset of the letters T, B, D")]
    InvalidLogic(String),
    #[error("node budget of {0} computation-tree nodes exceeded")]
    BudgetExceeded(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("morphism endpoints do not match")]
    MismatchedEndpoints,
    #[error("oracle bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("malformed proof: {0}")]
    MalformedProof(String),
    #[error("malformed model: {0}")]
    MalformedModel(String),
}

impl Error {
    pub(crate) fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: message.into(),
        }
    }
}
