use thiserror::Error;

use crate::graph::NodeId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("nodes {0} and {1} are not connected in the induced subgraph")]
    Disconnected(NodeId, NodeId),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The instance admits no feasible forest (or the solver's stated
    /// infeasibility condition fired).
    #[error("no solution")]
    NoSolution,

    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
