//! Value containers with explicit-copy semantics.
//!
//! Neither [`DenseVector`] nor [`BandedMatrix`] implements `Clone`: data is
//! duplicated only through `copy()`, which hands out a fresh [`BlockId`].
//! Passing a container by reference is the shared view; a `&mut` borrow is a
//! writable view and keeps the block identity of its source.

mod banded;
mod vector;

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

pub(crate) use banded::band_rows as banded_rows;
pub use banded::{q1_offsets, BandLayout, BandedMatrix};
pub use vector::DenseVector;

/// Identity of a data block as seen by the memory arbiter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockId(u64);

static NEXT_BLOCK: AtomicU64 = AtomicU64::new(1);

impl BlockId {
    /// Next id from the global monotone counter.
    pub fn fresh() -> Self {
        BlockId(NEXT_BLOCK.fetch_add(1, Ordering::Relaxed))
    }

    pub fn raw(self) -> u64 {
        self.0
    }
}

impl fmt::Display for BlockId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}
