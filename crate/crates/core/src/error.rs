use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("Fibonacci/Lucas index {index} exceeds the configured bound {bound}")]
    IndexBound { index: i64, bound: i64 },

    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),

    #[error("empty index range for identity `{0}`")]
    EmptyRange(String),

    #[error("invalid parameter: {0}")]
    Domain(String),

    #[error("vertex {vertex} out of range 1..={count}")]
    VertexRange { vertex: usize, count: usize },

    #[error("invalid edge: {0}")]
    InvalidEdge(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("reduction precondition violated: {0}")]
    Reduction(String),

    #[error("graph must have unit resistances on every edge")]
    NonUnitWeights,

    #[error("graph has {vertices} vertices, above the enumeration limit of {limit}")]
    TooLarge { vertices: usize, limit: usize },

    #[error("arithmetic invariant violated: {0}")]
    Arithmetic(String),

    #[error("solver did not converge: residual {residual:e} after {iterations} iterations")]
    NoConvergence { residual: f64, iterations: usize },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
