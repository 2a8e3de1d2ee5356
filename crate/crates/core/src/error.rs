use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("wave vector {0:?} is not on the lattice")]
    OffLattice(Vec<f64>),

    #[error("{kind}: argument rho = {rho} outside the domain of the nonlinearity")]
    Domain { kind: &'static str, rho: f64 },

    #[error("invalid nonlinearity: {0}")]
    InvalidNonlinearity(String),

    #[error("quadrature did not converge on [{a}, {b}] (estimated error {err:e})")]
    Quadrature { a: f64, b: f64, err: f64 },

    #[error("degenerate potential: {0}")]
    Degenerate(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("growth window detection failed: {0}")]
    WindowDetection(String),

    /// `line` is 1-based; 0 refers to the file as a whole.
    #[error("{}", config_message(*line, msg))]
    Config { line: usize, msg: String },

    #[error("csv: {0}")]
    Csv(String),

    #[error("snapshot {path}: byte offset {offset}: {msg}")]
    Snapshot { path: PathBuf, offset: u64, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn config_message(line: usize, msg: &str) -> String {
    if line == 0 {
        format!("config: {msg}")
    } else {
        format!("config line {line}: {msg}")
    }
}
