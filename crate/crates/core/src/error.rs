use thiserror::Error;

use crate::syntax::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("expression is not closed (free: {})", .0.join(", "))]
    OpenExpression(Vec<String>),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("operation requires a proposition-basis alphabet (`props ...;`)")]
    NotPowerset,
    #[error("invalid alphabet: {0}")]
    Alphabet(String),
    #[error("invalid lasso: {0}")]
    Lasso(String),
    #[error("boolean step: {0}")]
    Boolean(String),
    #[error("malformed proof: {0}")]
    Proof(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
