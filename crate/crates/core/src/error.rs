use thiserror::Error;

/// Errors produced across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("invalid hypergraph: {0}")]
    InvalidHypergraph(String),

    #[error("invalid partition: vertex {vertex} ({label}) is covered {count} times")]
    InvalidPartition {
        vertex: usize,
        label: String,
        count: usize,
    },

    #[error("invalid function table: {0}")]
    InvalidFunction(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("value out of range: {0}")]
    Range(String),

    #[error("capacity exceeded: {what} would have size {size}, cap is {cap}")]
    Capacity { what: String, size: u128, cap: u128 },

    #[error("operation requires pairwise disjoint edges: {0}")]
    RequiresPartition(String),

    #[error("edge map must be bijective: {0}")]
    RequiresBijective(String),

    #[error("vertex {0} is isolated (contained in no edge)")]
    IsolatedVertex(usize),

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("block for source edge {edge} is empty")]
    EmptyBlock { edge: usize },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("lambda too large for derandomization: lambda[{edge}] = {value} >= 1/8")]
    LambdaTooLarge { edge: usize, value: f64 },

    #[error("codebook infeasible: reached {achieved} of {requested} words (Gilbert-Varshamov guarantee {gv_guarantee:.3e})")]
    Infeasible {
        achieved: usize,
        requested: usize,
        gv_guarantee: f64,
    },

    #[error("epsilon {epsilon} must satisfy 0 < epsilon < (theta_delta - theta_0) / (theta_delta + theta_0) = {max}")]
    EpsilonTooLarge { epsilon: f64, max: f64 },

    #[error("edge count mismatch: {0}")]
    EdgeCountMismatch(String),

    #[error("edge map chain inconsistent: {0}")]
    ChainInconsistent(String),

    #[error("certificate failed: {what}\n{dump}")]
    Counterexample { what: String, dump: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
