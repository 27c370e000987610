//! Request-independent service logic: datasets, cached volumes, meshes.

use crate::cache::{CacheKey, VolumeCache, DEFAULT_CACHE_CAPACITY};
use crate::error::{ApiError, ServerError};
use crate::query::MeshRequest;
use crate::store::DatasetStore;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;
use usviz_core::mesh::encode_wire_mesh;
use usviz_core::pipeline::{default_iso, extract};
use usviz_core::ScalarVolume;

pub const DEFAULT_MAX_UPLOAD_BYTES: usize = 512 * 1024 * 1024;

#[derive(Debug, Clone)]
pub struct ServerConfig {
    pub data_dir: PathBuf,
    /// Viewer bundle served at `/`; a placeholder page when unset or missing.
    pub static_dir: Option<PathBuf>,
    pub max_upload_bytes: usize,
    pub cache_capacity: usize,
}

impl ServerConfig {
    pub fn new(data_dir: impl Into<PathBuf>) -> Self {
        Self {
            data_dir: data_dir.into(),
            static_dir: None,
            max_upload_bytes: DEFAULT_MAX_UPLOAD_BYTES,
            cache_capacity: DEFAULT_CACHE_CAPACITY,
        }
    }
}

/// Encoded mesh plus the metadata reported in response headers.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshResponse {
    pub body: Vec<u8>,
    pub vertex_count: usize,
    pub triangle_count: usize,
    pub iso: f32,
    pub compute_ms: f64,
    /// Whether the filtered volume came from the cache.
    pub cache_hit: bool,
}

pub struct AppState {
    pub config: ServerConfig,
    pub store: DatasetStore,
    pub cache: VolumeCache,
}

impl AppState {
    pub fn open(config: ServerConfig) -> Result<Self, ServerError> {
        let store = DatasetStore::open(&config.data_dir)?;
        let cache = VolumeCache::new(config.cache_capacity);
        Ok(Self { config, store, cache })
    }

    /// Volume after the request's filter chain, computed and cached on a miss.
    fn volume(&self, id: &str, request: &MeshRequest) -> Result<(Arc<ScalarVolume>, bool), ApiError> {
        let key: CacheKey = (id.to_string(), request.filters.to_string());
        if let Some(v) = self.cache.get(&key) {
            return Ok((v, true));
        }
        let raw_key: CacheKey = (id.to_string(), String::new());
        let raw = match self.cache.get(&raw_key) {
            Some(v) => v,
            None => {
                let v = Arc::new(self.store.load_volume(id)?);
                self.cache.insert(raw_key, v)
            }
        };
        if request.filters.is_empty() {
            return Ok((raw, false));
        }
        let filtered = request
            .filters
            .apply(&raw)
            .map_err(|e| ApiError::Pipeline(e.into()))?;
        Ok((self.cache.insert(key, Arc::new(filtered)), false))
    }

    /// Runs the pipeline for a registered dataset. Blocking; call from a
    /// worker thread.
    pub fn mesh(&self, id: &str, request: &MeshRequest) -> Result<MeshResponse, ApiError> {
        if self.store.get(id).is_none() {
            return Err(ApiError::NotFound(id.to_string()));
        }
        let start = Instant::now();
        let (volume, cache_hit) = self.volume(id, request)?;
        let iso = request.iso.unwrap_or_else(|| default_iso(&volume));
        let mesh = extract(&volume, iso, &request.algorithm)?;
        let body = encode_wire_mesh(&mesh).map_err(|e| ApiError::Internal(e.to_string()))?;
        let compute_ms = start.elapsed().as_secs_f64() * 1000.0;
        log::info!(
            "mesh {id} {} iso {iso} filters [{}]: {} vertices, {} triangles in {compute_ms:.1} ms (cache {})",
            request.algorithm.name(),
            request.filters,
            mesh.vertex_count(),
            mesh.triangle_count(),
            if cache_hit { "hit" } else { "miss" },
        );
        Ok(MeshResponse {
            body,
            vertex_count: mesh.vertex_count(),
            triangle_count: mesh.triangle_count(),
            iso,
            compute_ms,
            cache_hit,
        })
    }
}
