use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("edge list contains no edges")]
    EmptyGraph,

    #[error("graph has no node with degree >= 1")]
    NoArcs,

    #[error("node {0} is out of range")]
    NodeOutOfRange(usize),

    #[error("label file: {0}")]
    Labels(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("dense oracle limited to {limit} arcs, graph has {arcs}")]
    OracleTooLarge { arcs: usize, limit: usize },

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("degenerate split: {0}")]
    DegenerateSplit(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
