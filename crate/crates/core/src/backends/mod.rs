//! Backend selection, runtime configuration and residency tracking.
//!
//! A [`Backend`] bundles the tag that picks a kernel family with the tuning
//! knobs from [`RuntimeConfig`] and a handle to the shared
//! [`MemoryArbiter`]. Every linear-algebra kernel takes a `&Backend`.

mod arbiter;
mod config;
mod dispatch;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

pub use arbiter::{AccessMode, Location, MemoryArbiter, Residency};
pub use config::{RuntimeConfig, CONFIG_ENV, DEFAULT_BLOCK_SIZE, DEFAULT_CONFIG_FILE};
pub use dispatch::{dispatch, resolve, specialisations, KernelArgs, KernelOutput, KERNELS};

use crate::{BlockId, Error};

/// Kernel family that executes an operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum BackendTag {
    /// Straightforward reference loops. Always available.
    #[default]
    Generic,
    /// Cache-blocked, unrolled loops over `block_size` chunks.
    Blocked,
    /// Static partition of the index range over `worker_count` workers.
    Parallel,
}

impl BackendTag {
    pub const ALL: [BackendTag; 3] = [BackendTag::Generic, BackendTag::Blocked, BackendTag::Parallel];

    pub fn name(self) -> &'static str {
        match self {
            BackendTag::Generic => "generic",
            BackendTag::Blocked => "blocked",
            BackendTag::Parallel => "parallel",
        }
    }

    /// Memory space the backend's kernels operate in.
    pub fn location(self) -> Location {
        match self {
            BackendTag::Generic | BackendTag::Blocked => Location::Host,
            BackendTag::Parallel => Location::Accel,
        }
    }
}

impl fmt::Display for BackendTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BackendTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim().to_ascii_lowercase().as_str() {
            "generic" => Ok(BackendTag::Generic),
            "blocked" => Ok(BackendTag::Blocked),
            "parallel" => Ok(BackendTag::Parallel),
            _ => Err(Error::UnknownBackend(s.to_string())),
        }
    }
}

/// Execution context handed to every kernel.
#[derive(Debug, Clone)]
pub struct Backend {
    tag: BackendTag,
    workers: usize,
    block_size: usize,
    arbiter: Arc<MemoryArbiter>,
}

impl Backend {
    pub fn new(tag: BackendTag, config: &RuntimeConfig) -> Self {
        Self::with_arbiter(tag, config, Arc::new(MemoryArbiter::new()))
    }

    pub fn with_arbiter(tag: BackendTag, config: &RuntimeConfig, arbiter: Arc<MemoryArbiter>) -> Self {
        Self {
            tag,
            workers: config.worker_count,
            block_size: config.block_size,
            arbiter,
        }
    }

    /// Backend named by `config.default_backend`.
    pub fn from_config(config: &RuntimeConfig) -> Self {
        Self::new(config.default_backend, config)
    }

    /// Generic backend with default tuning and a private arbiter.
    pub fn generic() -> Self {
        Self::new(BackendTag::Generic, &RuntimeConfig::default())
    }

    /// Same tuning and arbiter under another tag.
    pub fn retag(&self, tag: BackendTag) -> Self {
        Self { tag, ..self.clone() }
    }

    pub fn tag(&self) -> BackendTag {
        self.tag
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    pub fn location(&self) -> Location {
        self.tag.location()
    }

    pub fn arbiter(&self) -> &Arc<MemoryArbiter> {
        &self.arbiter
    }

    #[inline]
    pub(crate) fn read(&self, block: BlockId, bytes: usize) {
        self.arbiter.acquire(block, bytes, self.location(), AccessMode::Read);
    }

    #[inline]
    pub(crate) fn write(&self, block: BlockId, bytes: usize) {
        self.arbiter.acquire(block, bytes, self.location(), AccessMode::Write);
    }
}
