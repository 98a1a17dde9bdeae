use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("no path from vertex {from} to vertex {to}")]
    NoPath { from: usize, to: usize },

    #[error("more than {cap} shortest paths between vertices {from} and {to}")]
    ResultTooLarge { from: usize, to: usize, cap: usize },

    #[error("graph is disconnected")]
    Disconnected,

    #[error("shortest-path count overflows 128 bits")]
    Overflow,

    #[error("edge index {index} out of range for {count} edges")]
    IndexOutOfRange { index: usize, count: usize },

    #[error("unsupported decomposition: {0}")]
    UnsupportedDecomposition(String),

    #[error("not a tree: {0}")]
    NotATree(String),

    #[error("labelling parts do not partition the edges: {0}")]
    Partition(String),

    #[error("bit width mismatch: expected {expected}, found {found}")]
    WidthMismatch { expected: usize, found: usize },
}
