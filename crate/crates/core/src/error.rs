use crate::formula::ParseError;
use crate::kripke::ModelError;

/// Errors that are not verdicts.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{module}: resource cap exceeded: {detail}")]
    ResourceCap {
        module: &'static str,
        detail: String,
    },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl Error {
    pub(crate) fn cap(module: &'static str, detail: impl Into<String>) -> Error {
        Error::ResourceCap {
            module,
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
