use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("graph6 parse error at byte {offset}: {message}")]
    Graph6 { offset: usize, message: String },

    #[error("edge list parse error on line {line}: {message}")]
    EdgeList { line: usize, message: String },

    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("graph6 short header supports at most 62 vertices, got {0}")]
    UnsupportedSize(usize),

    #[error("operation requires a non-empty graph")]
    EmptyGraph,

    #[error("invalid matching: {0}")]
    InvalidMatching(String),

    #[error("path is not augmenting: {0}")]
    NotAugmenting(String),

    #[error("{u}-{v} is not an edge")]
    NotAnEdge { u: usize, v: usize },

    #[error("invalid bipartition: {0}")]
    InvalidBipartition(String),

    #[error("bipartition is unbalanced: |X| = {x}, |Y| = {y}")]
    Unbalanced { x: usize, y: usize },

    #[error("vertices {u} and {v} are equal or adjacent; no vertex cut separates them")]
    Inseparable { u: usize, v: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("invalid corpus: {0}")]
    InvalidCorpus(String),

    #[error("no properties selected")]
    NoProperties,

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}
