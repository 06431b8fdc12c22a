use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex count {0} outside 1..=32")]
    VertexCount(usize),
    #[error("vertex {vertex} out of range for n={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("triple rank {rank} out of range for n={n}")]
    TripleOutOfRange { rank: usize, n: usize },
    #[error("vertices {0:?} do not form a strictly increasing triple")]
    InvalidTriple([usize; 3]),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("vertex sets do not partition 0..{n}")]
    NotAPartition { n: usize },
    #[error("unknown pattern `{0}`")]
    UnknownPattern(String),
    #[error("invalid construction: {0}")]
    InvalidConstruction(String),
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("computed value {computed} disagrees with certified value {cited} for {query}")]
    Disagreement { query: String, computed: u64, cited: u64 },
    #[error("invalid deduction step {index} ({kind}): {msg}")]
    InvalidStep { index: usize, kind: String, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
