use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Mutex;

use crate::{BlockId, Error};

/// Memory space holding a copy of a block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Location {
    Host,
    Accel,
}

impl Location {
    fn bit(self) -> u8 {
        match self {
            Location::Host => 0b01,
            Location::Accel => 0b10,
        }
    }
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Location::Host => "host",
            Location::Accel => "accel",
        })
    }
}

impl FromStr for Location {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim().to_ascii_lowercase().as_str() {
            "host" => Ok(Location::Host),
            "accel" => Ok(Location::Accel),
            _ => Err(Error::UnknownLocation(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AccessMode {
    Read,
    Write,
}

/// Snapshot of one block's bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Residency {
    valid: u8,
    pub dirty: Option<Location>,
}

impl Residency {
    fn fresh() -> Self {
        Self {
            valid: Location::Host.bit(),
            dirty: None,
        }
    }

    pub fn is_valid_at(&self, loc: Location) -> bool {
        self.valid & loc.bit() != 0
    }
}

#[derive(Debug, Default)]
struct State {
    blocks: HashMap<BlockId, Residency>,
    transfer_count: u64,
    transfer_bytes: u64,
}

/// Tracks where each block has a valid copy and counts the copies needed
/// to satisfy kernel accesses.
///
/// Blocks register on first touch as valid on the host. Writes follow a
/// write-allocate policy: the current contents are brought to the target
/// location first, then every other copy is invalidated.
#[derive(Debug, Default)]
pub struct MemoryArbiter {
    state: Mutex<State>,
}

impl MemoryArbiter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records an access and returns the number of transfers it required.
    pub fn acquire(&self, block: BlockId, bytes: usize, loc: Location, mode: AccessMode) -> u64 {
        let mut st = self.state.lock().unwrap_or_else(|e| e.into_inner());
        let entry = st.blocks.entry(block).or_insert_with(Residency::fresh);
        let transfers = u64::from(!entry.is_valid_at(loc));
        match mode {
            AccessMode::Read => {
                entry.valid |= loc.bit();
                entry.dirty = None;
            }
            AccessMode::Write => {
                entry.valid = loc.bit();
                entry.dirty = Some(loc);
            }
        }
        st.transfer_count += transfers;
        st.transfer_bytes += transfers * bytes as u64;
        transfers
    }

    pub fn residency(&self, block: BlockId) -> Option<Residency> {
        self.state.lock().unwrap_or_else(|e| e.into_inner()).blocks.get(&block).copied()
    }

    pub fn transfer_count(&self) -> u64 {
        self.state.lock().unwrap_or_else(|e| e.into_inner()).transfer_count
    }

    pub fn transfer_bytes(&self) -> u64 {
        self.state.lock().unwrap_or_else(|e| e.into_inner()).transfer_bytes
    }

    /// Drops a block's bookkeeping, e.g. when its container is released.
    pub fn forget(&self, block: BlockId) {
        self.state.lock().unwrap_or_else(|e| e.into_inner()).blocks.remove(&block);
    }
}
