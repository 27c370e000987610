//! HTTP service for the browser viewer.
//!
//! Datasets are uploaded as raw MetaImage bytes and addressed by content
//! hash. Mesh requests run the filter chain and extraction on a blocking
//! worker and return the mesh in the `MSH1` binary layout, with counts and
//! timing in `X-*` response headers.

pub mod cache;
pub mod error;
pub mod query;
pub mod routes;
pub mod service;
pub mod store;

pub use error::{ApiError, ServerError};
pub use query::{MeshRequest, ParamError};
pub use routes::router;
pub use service::{AppState, MeshResponse, ServerConfig};
pub use store::{DatasetRecord, DatasetStore};

use std::net::SocketAddr;
use std::sync::Arc;

/// Binds `addr` and serves until the process is stopped.
pub async fn serve(config: ServerConfig, addr: SocketAddr) -> Result<(), ServeError> {
    let state = Arc::new(AppState::open(config)?);
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(state)).await?;
    Ok(())
}

#[derive(Debug, thiserror::Error)]
pub enum ServeError {
    #[error(transparent)]
    Server(#[from] ServerError),
    #[error("Io: {0}")]
    Io(#[from] std::io::Error),
}
