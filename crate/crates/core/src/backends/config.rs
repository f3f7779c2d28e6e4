use std::path::{Path, PathBuf};

use log::warn;

use super::BackendTag;
use crate::{Error, Result};

/// Environment variable overriding the config file location.
pub const CONFIG_ENV: &str = "HONEI_CONFIG";
pub const DEFAULT_CONFIG_FILE: &str = ".hplarc";
pub const DEFAULT_BLOCK_SIZE: usize = 4096;

/// Runtime parameters read from a `key=value` file.
///
/// ```text
/// # comment
/// worker_count = 4
/// block_size = 1024
/// default_backend = blocked
/// ```
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuntimeConfig {
    pub worker_count: usize,
    pub block_size: usize,
    pub default_backend: BackendTag,
    pub source_path: Option<PathBuf>,
}

impl Default for RuntimeConfig {
    fn default() -> Self {
        Self {
            worker_count: std::thread::available_parallelism().map_or(1, |n| n.get()),
            block_size: DEFAULT_BLOCK_SIZE,
            default_backend: BackendTag::Generic,
            source_path: None,
        }
    }
}

impl RuntimeConfig {
    /// Reads `path`; a missing file yields the defaults.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        match std::fs::read_to_string(path) {
            Ok(text) => Self::parse(&text, path),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(Self {
                source_path: Some(path.to_path_buf()),
                ..Self::default()
            }),
            Err(source) => Err(Error::ConfigIo {
                path: path.to_path_buf(),
                source,
            }),
        }
    }

    /// Loads from `$HONEI_CONFIG`, falling back to `./.hplarc`.
    pub fn from_env() -> Result<Self> {
        Self::load(Self::env_path())
    }

    pub fn env_path() -> PathBuf {
        std::env::var_os(CONFIG_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from(DEFAULT_CONFIG_FILE))
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let mut cfg = Self {
            source_path: Some(path.to_path_buf()),
            ..Self::default()
        };
        let err = |line: usize, message: String| Error::ConfigParse {
            path: path.to_path_buf(),
            line,
            message,
        };
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(err(line_no, format!("expected `key=value`, got `{line}`")));
            };
            let (key, value) = (key.trim(), value.trim());
            let count = || {
                value
                    .parse::<usize>()
                    .map_err(|e| err(line_no, format!("{key}: `{value}`: {e}")))
            };
            match key {
                "worker_count" => cfg.worker_count = count()?,
                "block_size" => cfg.block_size = count()?,
                "default_backend" => {
                    cfg.default_backend = value
                        .parse()
                        .map_err(|e: Error| err(line_no, e.to_string()))?
                }
                _ => warn!("{}:{line_no}: ignoring unknown key `{key}`", path.display()),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.worker_count == 0 {
            return Err(Error::InvalidConfig("worker_count must be >= 1".into()));
        }
        if !self.block_size.is_power_of_two() {
            return Err(Error::InvalidConfig(format!(
                "block_size must be a power of two, got {}",
                self.block_size
            )));
        }
        Ok(())
    }

    pub fn with_workers(mut self, worker_count: usize) -> Self {
        self.worker_count = worker_count;
        self
    }

    pub fn with_block_size(mut self, block_size: usize) -> Self {
        self.block_size = block_size;
        self
    }
}
