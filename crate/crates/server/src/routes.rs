use crate::error::ApiError;
use crate::query::MeshRequest;
use crate::service::AppState;
use crate::store::DatasetRecord;
use axum::body::Bytes;
use axum::extract::{DefaultBodyLimit, Path, Query, State};
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{Html, IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use serde::Deserialize;
use std::sync::Arc;
use tower_http::services::ServeDir;

const PLACEHOLDER_PAGE: &str = "<!doctype html>\n<html><head><title>usviz</title></head>\n<body><h1>usviz</h1><p>The viewer bundle is not installed. The API is available under <code>/api/datasets</code>.</p></body></html>\n";

pub fn router(state: Arc<AppState>) -> Router {
    let api = Router::new()
        .route("/api/datasets", get(list_datasets).post(upload_dataset))
        .route("/api/datasets/{id}", get(get_dataset))
        .route("/api/datasets/{id}/mesh", get(get_mesh))
        .layer(DefaultBodyLimit::max(state.config.max_upload_bytes));
    let static_dir = state.config.static_dir.clone().filter(|d| d.is_dir());
    let api = api.with_state(state);
    match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api.route("/", get(|| async { Html(PLACEHOLDER_PAGE) })),
    }
}

#[derive(Deserialize)]
struct UploadQuery {
    name: Option<String>,
}

async fn upload_dataset(
    State(state): State<Arc<AppState>>,
    Query(query): Query<UploadQuery>,
    body: Bytes,
) -> Result<Response, ApiError> {
    let name = query.name.unwrap_or_else(|| "untitled".to_string());
    let reg = tokio::task::spawn_blocking(move || state.store.register(&body, &name))
        .await
        .map_err(|e| ApiError::Internal(e.to_string()))??;
    let status = if reg.created { StatusCode::CREATED } else { StatusCode::OK };
    Ok((status, Json(reg.record)).into_response())
}

async fn list_datasets(State(state): State<Arc<AppState>>) -> Json<Vec<DatasetRecord>> {
    Json(state.store.list())
}

async fn get_dataset(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> Result<Json<DatasetRecord>, ApiError> {
    state.store.get(&id).map(Json).ok_or(ApiError::NotFound(id))
}

async fn get_mesh(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    Query(pairs): Query<Vec<(String, String)>>,
) -> Result<Response, ApiError> {
    if state.store.get(&id).is_none() {
        return Err(ApiError::NotFound(id));
    }
    let request = MeshRequest::from_pairs(&pairs).map_err(ApiError::InvalidParams)?;
    let mesh = tokio::task::spawn_blocking(move || state.mesh(&id, &request))
        .await
        .map_err(|e| ApiError::Internal(e.to_string()))??;

    let mut response = mesh.body.into_response();
    let headers = response.headers_mut();
    let num = |v: String| HeaderValue::from_str(&v).expect("numeric header value");
    headers.insert(header::CONTENT_TYPE, HeaderValue::from_static("application/octet-stream"));
    headers.insert("x-vertex-count", num(mesh.vertex_count.to_string()));
    headers.insert("x-triangle-count", num(mesh.triangle_count.to_string()));
    headers.insert("x-compute-ms", num(format!("{:.3}", mesh.compute_ms)));
    headers.insert("x-iso", num(mesh.iso.to_string()));
    headers.insert(
        "x-cache",
        HeaderValue::from_static(if mesh.cache_hit { "hit" } else { "miss" }),
    );
    Ok(response)
}
