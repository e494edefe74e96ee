use num_bigint::BigUint;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: self-loop on vertex `{vertex}`")]
    SelfLoop { line: usize, vertex: String },

    #[error("line {line}: duplicate edge `{u}`-`{v}`")]
    DuplicateEdge { line: usize, u: String, v: String },

    #[error("graph has no edges")]
    EmptyGraph,

    #[error("graph is disconnected; no spanning tree exists")]
    Disconnected,

    #[error("vertex index {index} out of range for {vertex_count} vertices")]
    VertexOutOfRange { index: usize, vertex_count: usize },

    #[error("negative or non-finite edge weight {0}")]
    InvalidWeight(f64),

    #[error("selection has {found} labels, expected {expected}")]
    SelectionSize { expected: usize, found: usize },

    #[error("invalid edge selection: {0}")]
    InvalidSelection(String),

    #[error("degree sequence is not realizable by a tree: {0}")]
    UnrealizableDegrees(String),

    #[error("sequence lengths differ ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("distance depth {requested} exceeds populated depth {available}")]
    DepthExceeded { requested: usize, available: usize },

    #[error("graph has {count} spanning trees, more than the cap of {cap}")]
    TooManyTrees { count: BigUint, cap: u64 },

    #[error("no feasible individual was found")]
    NoFeasible,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid objective: {0}")]
    InvalidObjective(String),

    #[error("invalid variant: {0}")]
    InvalidVariant(String),

    #[error("cannot generate graph: {0}")]
    InvalidGenerator(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
