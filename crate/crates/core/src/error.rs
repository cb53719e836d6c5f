// SPDX-License-Identifier: Apache-2.0
use std::path::PathBuf;

/// Errors produced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid subset: {0}")]
    InvalidSubset(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("positivity violation: configuration {config} has zero probability")]
    Positivity { config: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("capacity exceeded: {what} supports at most {max}, got {got}")]
    Capacity { what: &'static str, max: usize, got: usize },
    #[error("graph contains a directed cycle")]
    Cyclic,
    #[error("infeasible density: {edges} expected edges requested on {nodes} nodes")]
    InfeasibleDensity { edges: usize, nodes: usize },
    #[error("solver failure: {reason}")]
    SolverFailure { reason: String, trace: Vec<crate::learner::TraceRow> },
    #[error("parse error in {path}: line {line}: {msg}")]
    Parse { path: PathBuf, line: u64, msg: String },
    #[error("config error: {0}")]
    Config(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
