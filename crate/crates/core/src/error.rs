use thiserror::Error;

use crate::uqw::DenseCertificate;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("balls around centers {a} and {b} overlap (shared vertex {shared})")]
    OverlappingBalls { a: usize, b: usize, shared: usize },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("splitter exceeded deletion budget in round {}: {} candidates", .0.round, .0.candidates.len())]
    TooDense(Box<DenseCertificate>),

    #[error("terminals {a} and {b} lie in different components")]
    Infeasible { a: usize, b: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}
