use crate::game::GameSolution;

/// Crate-wide error type. Variants map one-to-one onto the failure modes of
/// the public operations; none of them are expected on well-formed inputs.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("graphs are limited to {max} vertices, got {got}")]
    TooManyVertices { got: usize, max: usize },

    #[error("edge ({u}, {v}) out of range for a graph on {n} vertices")]
    EdgeOutOfRange { u: usize, v: usize, n: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),

    #[error("dimension mismatch: {left} vs {right} ({what})")]
    DimensionMismatch {
        what: &'static str,
        left: usize,
        right: usize,
    },

    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),

    #[error("vertex set is not a cover of the required edge set")]
    NotACover,

    #[error("enumeration cap exceeded: n = {n} > cap = {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("iterative solver did not reach the requested gap (gap = {gap:.3e} after {iterations} iterations)")]
    NoConvergence {
        gap: f64,
        iterations: u64,
        partial: Box<GameSolution>,
    },

    #[error("invalid message: {0}")]
    InvalidMessage(String),

    #[error("invalid support function: {0}")]
    InvalidSupport(String),

    #[error("no structure found: {0}")]
    NotFound(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
