use crate::query::ParamError;
use crate::store::RegisterError;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde_json::json;
use std::path::{Path, PathBuf};
use thiserror::Error;
use usviz_core::pipeline::PipelineError;

/// Failures outside a single request: startup, storage.
#[derive(Debug, Error)]
pub enum ServerError {
    #[error("Io: {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("Corrupt: {path}: {reason}")]
    Corrupt { path: PathBuf, reason: String },
}

impl ServerError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        ServerError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

/// Request failures, rendered as `{"error": ..., "kind": ...}` JSON.
#[derive(Debug, Error)]
pub enum ApiError {
    #[error("unknown dataset {0}")]
    NotFound(String),
    #[error(transparent)]
    Upload(#[from] RegisterError),
    #[error("invalid parameters: {}", .0.iter().map(|p| format!("{} ({})", p.name, p.reason)).collect::<Vec<_>>().join(", "))]
    InvalidParams(Vec<ParamError>),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error(transparent)]
    Server(#[from] ServerError),
    #[error("internal error: {0}")]
    Internal(String),
}

impl ApiError {
    pub fn status(&self) -> StatusCode {
        match self {
            ApiError::NotFound(_) => StatusCode::NOT_FOUND,
            ApiError::Upload(RegisterError::Parse(_)) => StatusCode::BAD_REQUEST,
            ApiError::InvalidParams(_) | ApiError::Pipeline(_) => StatusCode::UNPROCESSABLE_ENTITY,
            ApiError::Upload(RegisterError::Io(_)) | ApiError::Server(_) | ApiError::Internal(_) => {
                StatusCode::INTERNAL_SERVER_ERROR
            }
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ApiError::NotFound(_) => "NotFound",
            ApiError::Upload(RegisterError::Parse(e)) => e.kind(),
            ApiError::Upload(RegisterError::Io(_)) => "Io",
            ApiError::InvalidParams(_) => "InvalidParameters",
            ApiError::Pipeline(_) => "Unprocessable",
            ApiError::Server(_) | ApiError::Internal(_) => "Internal",
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = self.status();
        if status.is_server_error() {
            log::error!("{self}");
        }
        let mut body = json!({ "error": self.to_string(), "kind": self.kind() });
        if let ApiError::InvalidParams(params) = &self {
            body["params"] = json!(params);
        }
        (status, Json(body)).into_response()
    }
}
