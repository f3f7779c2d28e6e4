use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("container length must be at least 1")]
    EmptyContainer,

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("band offset {offset} out of range for order {n}")]
    BandOffsetOutOfRange { offset: isize, n: usize },

    #[error("band offset {offset} is not part of the Q1 layout for m = {m}")]
    IllegalQ1Offset { offset: isize, m: usize },

    #[error("order {0} is not the square of a grid size >= 2")]
    NotASquareGrid(usize),

    #[error("{path}:{line}: {message}")]
    ConfigParse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("failed to read config {path}: {source}")]
    ConfigIo {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid runtime configuration: {0}")]
    InvalidConfig(String),

    #[error("unknown backend `{0}`")]
    UnknownBackend(String),

    #[error("unknown location `{0}`")]
    UnknownLocation(String),

    #[error("unknown kernel `{0}`")]
    UnknownKernel(String),

    #[error("kernel `{kernel}` called with arguments for `{args}`")]
    KernelArgs {
        kernel: String,
        args: &'static str,
    },

    #[error("zero diagonal entry in row {row}")]
    ZeroDiagonal { row: usize },

    #[error("CG breakdown at iteration {iteration}: p'Ap = {curvature:e}")]
    Breakdown { iteration: usize, curvature: f64 },

    #[error("inner single-precision solve diverged: residual grew from {initial:e} to {final_:e}")]
    InnerDivergence { initial: f64, final_: f64 },

    #[error("grid level {level} outside supported range {min}..={max}")]
    LevelOutOfRange { level: usize, min: usize, max: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("CFL condition violated: dt = {dt}, largest admissible dt = {max_dt}")]
    Cfl { dt: f64, max_dt: f64 },

    #[error("non-finite value in state at step {step}")]
    NonFinite { step: usize },
}
