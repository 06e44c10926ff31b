use thiserror::Error;

use crate::diagram::{EdgeId, VertexId};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),

    #[error("diagram has {legs} boundary legs, above the interpretation cap of {cap}")]
    BoundaryCapExceeded { legs: usize, cap: usize },

    #[error("contraction needs a rank-{rank} intermediate tensor, above the budget of {budget}")]
    BudgetExceeded { rank: usize, budget: usize },

    #[error("enumeration of {candidates} candidates exceeds the limit of {limit}")]
    EnumerationTooLarge { candidates: u128, limit: u128 },

    #[error("arity mismatch: {0}")]
    ArityMismatch(String),

    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),

    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),

    #[error("substitution failed: {0}")]
    Substitution(String),

    #[error("embedding no longer matches the host diagram: {0}")]
    StaleEmbedding(String),

    #[error("invalid rule parameter: {0}")]
    InvalidParameter(String),

    #[error("web violates the highlighting rules at vertex {0}")]
    InvalidWeb(VertexId),

    #[error("region is not a detecting region: {0}")]
    NotDetecting(String),

    #[error("spider {0} is not covered by the web")]
    NotCovered(VertexId),

    #[error("flow precondition violated: {0}")]
    Flow(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("generators {0} and {1} anticommute")]
    NonCommuting(usize, usize),

    #[error("generator {0} is dependent on the previous generators")]
    DependentGenerator(usize),

    #[error("identity Pauli string has no measurement support")]
    IdentityPauli,

    #[error("schedule body is empty")]
    EmptyBody,

    #[error("schedule did not establish within the simulated window")]
    NotEstablished,

    #[error("schedule error: {0}")]
    Schedule(String),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
