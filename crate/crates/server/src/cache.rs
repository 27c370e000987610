//! Small least-recently-used cache of (filtered) volumes.

use parking_lot::Mutex;
use std::collections::VecDeque;
use std::sync::Arc;
use usviz_core::ScalarVolume;

pub const DEFAULT_CACHE_CAPACITY: usize = 4;

/// Dataset id plus canonical filter chain; the empty chain is the raw volume.
pub type CacheKey = (String, String);

/// Entries are ordered from least to most recently used. Lookups and
/// insertions take a short lock; computing a missing entry happens outside
/// it, so concurrent readers never wait on a filter run.
pub struct VolumeCache {
    capacity: usize,
    entries: Mutex<VecDeque<(CacheKey, Arc<ScalarVolume>)>>,
}

impl VolumeCache {
    pub fn new(capacity: usize) -> Self {
        Self {
            capacity: capacity.max(1),
            entries: Mutex::new(VecDeque::new()),
        }
    }

    pub fn get(&self, key: &CacheKey) -> Option<Arc<ScalarVolume>> {
        let mut entries = self.entries.lock();
        let pos = entries.iter().position(|(k, _)| k == key)?;
        let entry = entries.remove(pos)?;
        let volume = Arc::clone(&entry.1);
        entries.push_back(entry);
        Some(volume)
    }

    /// Inserts `volume` unless another thread got there first; returns the
    /// cached value either way.
    pub fn insert(&self, key: CacheKey, volume: Arc<ScalarVolume>) -> Arc<ScalarVolume> {
        let mut entries = self.entries.lock();
        if let Some((_, existing)) = entries.iter().find(|(k, _)| *k == key) {
            return Arc::clone(existing);
        }
        if entries.len() == self.capacity {
            entries.pop_front();
        }
        entries.push_back((key, Arc::clone(&volume)));
        volume
    }

    pub fn len(&self) -> usize {
        self.entries.lock().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn keys(&self) -> Vec<CacheKey> {
        self.entries.lock().iter().map(|(k, _)| k.clone()).collect()
    }
}
