use serde::Serialize;
use thiserror::Error;

/// Reason a single fanout candidate was dropped during the fit sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "reason", content = "value", rename_all = "kebab-case")]
pub enum Rejection {
    /// Fewer than two levels carry positive total degree.
    TooFewLevels(usize),
    /// `c = b e^{-a}` landed outside `(1, b)`.
    ScaleOutOfRange(f64),
}

impl std::fmt::Display for Rejection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Rejection::TooFewLevels(k) => write!(f, "only {k} usable level(s)"),
            Rejection::ScaleOutOfRange(c) => write!(f, "c = {c} outside (1, b)"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input{}: {msg}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    MalformedInput { line: Option<usize>, msg: String },

    #[error("node id {id} out of range for {n} nodes")]
    NodeOutOfRange { id: usize, n: usize },

    #[error("graph is disconnected; extract the giant component first")]
    Disconnected,

    #[error("unsupported operation: {0}")]
    Unsupported(&'static str),

    #[error("invalid cut: the member set must be a nonempty proper subset")]
    InvalidCut,

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("level {level} outside [0, {max}]")]
    LevelOutOfRange { level: u32, max: u32 },

    #[error("numeric overflow: {0}")]
    Overflow(String),

    #[error("graph with {n} nodes exceeds the limit of {max}")]
    TooLarge { n: usize, max: usize },

    #[error("coverage {kappa} never reached; maximum coverage is {max_coverage}")]
    CoverageNotReached { kappa: f64, max_coverage: f64 },

    #[error("heights missing for node {0}")]
    MissingHeights(usize),

    #[error("coordinates missing or of inconsistent dimension")]
    MissingCoordinates,

    #[error("singular kernel: a non-adjacent pair has zero distance")]
    SingularKernel,

    #[error("regression rejected: {0}")]
    FitRejected(Rejection),

    #[error("every fanout was rejected ({} candidates)", rejections.len())]
    FitFailed { rejections: Vec<(u32, Rejection)> },

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("graph is empty after preprocessing")]
    EmptyGraph,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
