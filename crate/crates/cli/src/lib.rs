//! Clients behind the `hpla` binary. Each one returns a report value so it
//! can be driven from tests without going through the process boundary.

pub mod bench;
pub mod output;
pub mod poisson;
pub mod swe;

use std::path::{Path, PathBuf};

use hpla_core::{Backend, BackendTag, RuntimeConfig};

pub use bench::{bench_axpy, BenchReport, BenchRow};
pub use output::{read_height_csv, write_height_field, FieldFormat};
pub use poisson::{poisson_client, PoissonArgs, PoissonReport, MAX_CLIENT_LEVEL};
pub use swe::{swe_client, SweArgs, SweSummary};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] hpla_core::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("solver did not converge on level {level} after {iterations} iterations")]
    NotConverged { level: usize, iterations: usize },

    #[error("{0}")]
    Usage(String),
}

pub type CliResult<T> = Result<T, CliError>;

pub(crate) fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Runtime configuration from `config` if given, otherwise from the
/// environment, with an optional backend override.
pub fn make_backend(config: Option<&Path>, backend: Option<BackendTag>) -> CliResult<Backend> {
    let cfg = match config {
        Some(path) => RuntimeConfig::load(path)?,
        None => RuntimeConfig::from_env()?,
    };
    let tag = backend.unwrap_or(cfg.default_backend);
    Ok(Backend::new(tag, &cfg))
}
