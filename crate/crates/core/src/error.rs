use thiserror::Error;

use crate::model::{Edge, VertexId};

/// Errors raised by graph validation, numerical analysis and the synthesis pipelines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(VertexId),

    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),

    #[error("vertices `{0}` and `{1}` share an edge but occupy the same point")]
    CoincidentPoints(VertexId, VertexId),

    #[error("graph has no edges")]
    EmptyGraph,

    #[error("graph is disconnected")]
    Disconnected,

    #[error("graph is not planar ({} edges in the obstruction)", witness.len())]
    NotPlanar { witness: Vec<(usize, usize)> },

    #[error("pinned graph is not isostatic: {0}")]
    NotIsostatic(String),

    #[error("pinned graph is not an Assur graph")]
    NotAssur,

    #[error("rigidity matrix is {rows}x{cols}, a square matrix is required")]
    NotSquare { rows: usize, cols: usize },

    #[error("no generic configuration found after {0} attempts")]
    RetryExhausted(usize),

    #[error("reciprocal does not close: residual {residual:e} exceeds {bound:e}")]
    ClosureFailure { residual: f64, bound: f64 },

    #[error("edge {0} is not parallel to its dual edge")]
    NotParallel(Edge),

    #[error("edge {0} has zero length")]
    ZeroLength(Edge),

    #[error("parallel drawing moves pinned vertex `{0}`")]
    PinMoved(VertexId),

    #[error("crossing of {0} and {1}: {2}")]
    BadCrossing(Edge, Edge, String),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("driver error: {0}")]
    Driver(String),

    #[error("conflicting driver replacements: bar {0} inserted twice")]
    DriverConflict(Edge),

    #[error("internal contradiction: {0}")]
    Internal(String),

    #[error("{path}: {message}")]
    Schema { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
