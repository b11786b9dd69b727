use std::path::PathBuf;

use crate::states::Frame;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument outside the domain of the operation: a bad spin label,
    /// a photon number in the wrong parity class, an unnormalized state.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid index {name} = {value} for j = {j}")]
    InvalidIndex { name: &'static str, value: crate::HalfInt, j: crate::HalfInt },

    #[error("frame error: operation requires a state {expected}, got one {found}")]
    Frame { expected: Frame, found: Frame },

    #[error("phi -> 0 limit did not converge: {0}")]
    NumericalLimit(String),

    /// A result that should be real by construction came out with an
    /// imaginary part above tolerance.
    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("unknown state label `{0}`")]
    UnknownState(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("cannot write {path}: {source}")]
    Output {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
