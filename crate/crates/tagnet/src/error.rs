use thiserror::Error;

/// Errors produced anywhere in the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("malformed XML: {0}")]
    Xml(String),

    #[error("node id {0} out of range (N = {1})")]
    NodeOutOfRange(usize, usize),

    #[error("empty graph: no nodes")]
    EmptyGraph,

    #[error("no node with degree >= 2; clustering undefined")]
    ClusteringUndefined,

    #[error("graph has no edges; no connected pairs to average over")]
    NoConnectedPairs,

    #[error("power-law fit degenerate: {points} usable points, need at least 3")]
    FitDegenerate { points: usize },

    #[error("ER baseline undefined: requires n > 1 and average degree > 1 (got n = {n}, <k> = {avg_degree})")]
    BaselineUndefined { n: usize, avg_degree: f64 },

    #[error("invalid generator parameters: {0}")]
    InvalidGenerator(String),

    #[error("bad snapshot: {0}")]
    Snapshot(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
