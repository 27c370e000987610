//! Content-addressed dataset registry persisted under the data directory.
//!
//! Each dataset is stored as `<id>.mha` (the uploaded bytes, untouched) and
//! `<id>.json` (its record). The id is the SHA-256 of the uploaded bytes, so
//! re-uploads are idempotent and ids survive restarts.

use crate::error::ServerError;
use parking_lot::RwLock;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};
use usviz_core::metaimage::{read_volume, MhaError};
use usviz_core::ScalarVolume;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetRecord {
    pub id: String,
    pub name: String,
    pub dims: [usize; 3],
    pub spacing: [f64; 3],
    pub element_type: String,
    pub value_range: [f32; 2],
    /// Milliseconds since the Unix epoch.
    pub created_at: u64,
}

/// Result of [`DatasetStore::register`].
#[derive(Debug, Clone, PartialEq)]
pub struct Registration {
    pub record: DatasetRecord,
    pub created: bool,
}

pub struct DatasetStore {
    dir: PathBuf,
    records: RwLock<BTreeMap<String, DatasetRecord>>,
}

pub fn content_id(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn now_ms() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0)
}

/// Writes `bytes` to `path` through a temporary file in the same directory.
fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

impl DatasetStore {
    /// Opens (creating if needed) `dir` and loads every persisted record.
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self, ServerError> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| ServerError::io(&dir, e))?;
        let mut records = BTreeMap::new();
        let entries = fs::read_dir(&dir).map_err(|e| ServerError::io(&dir, e))?;
        for entry in entries {
            let path = entry.map_err(|e| ServerError::io(&dir, e))?.path();
            if path.extension().and_then(|e| e.to_str()) != Some("json") {
                continue;
            }
            let text = fs::read_to_string(&path).map_err(|e| ServerError::io(&path, e))?;
            let record: DatasetRecord = match serde_json::from_str(&text) {
                Ok(r) => r,
                Err(e) => {
                    log::warn!("skipping unreadable record {}: {e}", path.display());
                    continue;
                }
            };
            if !dir.join(format!("{}.mha", record.id)).is_file() {
                log::warn!("skipping record {} without its volume file", record.id);
                continue;
            }
            records.insert(record.id.clone(), record);
        }
        log::info!("loaded {} dataset(s) from {}", records.len(), dir.display());
        Ok(Self {
            dir,
            records: RwLock::new(records),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn volume_path(&self, id: &str) -> PathBuf {
        self.dir.join(format!("{id}.mha"))
    }

    /// Parses and stores an upload. Identical bytes yield the existing record.
    pub fn register(&self, bytes: &[u8], name: &str) -> Result<Registration, RegisterError> {
        let id = content_id(bytes);
        if let Some(record) = self.records.read().get(&id) {
            return Ok(Registration {
                record: record.clone(),
                created: false,
            });
        }
        let (header, volume) = read_volume(bytes)?;
        let (lo, hi) = volume.value_range();

        let mut records = self.records.write();
        if let Some(record) = records.get(&id) {
            return Ok(Registration {
                record: record.clone(),
                created: false,
            });
        }
        let record = DatasetRecord {
            id: id.clone(),
            name: name.to_string(),
            dims: volume.dims(),
            spacing: volume.spacing(),
            element_type: header.element_type.token().to_string(),
            value_range: [lo, hi],
            created_at: now_ms(),
        };
        let json = serde_json::to_vec_pretty(&record).expect("record serializes");
        write_atomic(&self.volume_path(&id), bytes).map_err(|e| RegisterError::Io(e.to_string()))?;
        write_atomic(&self.dir.join(format!("{id}.json")), &json)
            .map_err(|e| RegisterError::Io(e.to_string()))?;
        records.insert(id.clone(), record.clone());
        log::info!("registered dataset {id} ({name}) dims {:?}", record.dims);
        Ok(Registration {
            record,
            created: true,
        })
    }

    pub fn get(&self, id: &str) -> Option<DatasetRecord> {
        self.records.read().get(id).cloned()
    }

    /// All records, newest first; ties by id.
    pub fn list(&self) -> Vec<DatasetRecord> {
        let mut all: Vec<DatasetRecord> = self.records.read().values().cloned().collect();
        all.sort_by(|a, b| b.created_at.cmp(&a.created_at).then_with(|| a.id.cmp(&b.id)));
        all
    }

    /// Reads and parses the stored volume of a registered dataset.
    pub fn load_volume(&self, id: &str) -> Result<ScalarVolume, ServerError> {
        let path = self.volume_path(id);
        let bytes = fs::read(&path).map_err(|e| ServerError::io(&path, e))?;
        let (_, volume) = read_volume(&bytes).map_err(|e| ServerError::Corrupt {
            path: path.clone(),
            reason: e.to_string(),
        })?;
        Ok(volume)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RegisterError {
    #[error(transparent)]
    Parse(#[from] MhaError),
    #[error("Io: could not persist dataset: {0}")]
    Io(String),
}
