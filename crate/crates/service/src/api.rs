//! HTTP routes. Every error body is `{"error": {"code", "message"}}`.

use std::collections::HashMap;
use std::sync::Arc;

use axum::body::{Body, Bytes};
use axum::extract::multipart::{MultipartError, MultipartRejection};
use axum::extract::rejection::QueryRejection;
use axum::extract::{DefaultBodyLimit, Multipart, Path as UrlPath, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{any, get, post};
use axum::{Json, Router};
use segstudio::metrics::build_report;
use segstudio::pipeline::{load_contours, load_mask, reorient_file};
use segstudio::{Mask, MetricsError, RasterOptions};
use serde::Deserialize;
use serde_json::json;
use tower_http::services::ServeDir;

use crate::config::ServiceConfig;
use crate::jobs::{JobState, JobStore};

#[derive(Clone)]
pub struct AppState {
    pub store: Arc<JobStore>,
    pub config: Arc<ServiceConfig>,
}

impl AppState {
    pub fn new(config: ServiceConfig) -> std::io::Result<Self> {
        let store = JobStore::new(&config.workdir, config.job_ttl, config.workers)?;
        Ok(Self {
            store: Arc::new(store),
            config: Arc::new(config),
        })
    }
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    code: String,
    message: String,
}

impl ApiError {
    pub fn new(status: StatusCode, code: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            status,
            code: code.into(),
            message: message.into(),
        }
    }

    fn not_found(what: &str) -> Self {
        Self::new(
            StatusCode::NOT_FOUND,
            "NOT_FOUND",
            format!("{what} not found"),
        )
    }

    fn internal(err: impl std::fmt::Display) -> Self {
        Self::new(
            StatusCode::INTERNAL_SERVER_ERROR,
            "INTERNAL",
            err.to_string(),
        )
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = json!({"error": {"code": self.code, "message": self.message}});
        (self.status, Json(body)).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

pub fn router(state: AppState) -> Router {
    let limit = state.config.max_upload_bytes;
    let static_dir = state.config.static_dir.clone();
    let api = Router::new()
        .route("/api/jobs", post(create_job))
        .route("/api/jobs/{id}/mask", post(start_mask).get(download_mask))
        .route("/api/jobs/{id}/progress", get(progress))
        .route("/api/metrics", post(metrics))
        .route("/api/convert", post(convert))
        .route("/api", any(unknown_api))
        .route("/api/{*rest}", any(unknown_api))
        .layer(DefaultBodyLimit::max(limit))
        .with_state(state);
    match static_dir.filter(|d| d.is_dir()) {
        Some(dir) => {
            api.fallback_service(ServeDir::new(dir).not_found_service(any(frontend_missing)))
        }
        None => api.fallback(frontend_missing),
    }
}

async fn unknown_api() -> ApiError {
    ApiError::not_found("endpoint")
}

async fn frontend_missing() -> ApiError {
    ApiError::new(
        StatusCode::NOT_FOUND,
        "NOT_FOUND",
        "frontend bundle not built; the API is served under /api",
    )
}

/// Collect the named parts of a multipart upload; other parts are ignored.
async fn read_parts<const N: usize>(
    multipart: Result<Multipart, MultipartRejection>,
    names: [&'static str; N],
) -> ApiResult<[Bytes; N]> {
    let mut multipart = multipart
        .map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, "BAD_MULTIPART", e.body_text()))?;
    let mut found: HashMap<&'static str, Bytes> = HashMap::new();
    loop {
        let field = multipart.next_field().await.map_err(multipart_error)?;
        let Some(field) = field else { break };
        let Some(name) = field
            .name()
            .and_then(|n| names.iter().find(|w| **w == n))
            .copied()
        else {
            continue;
        };
        let bytes = field.bytes().await.map_err(multipart_error)?;
        found.insert(name, bytes);
    }
    let mut out = Vec::with_capacity(N);
    for name in names {
        let part = found.remove(name).ok_or_else(|| {
            ApiError::new(
                StatusCode::BAD_REQUEST,
                "MISSING_PART",
                format!("multipart part `{name}` is required"),
            )
        })?;
        out.push(part);
    }
    Ok(out.try_into().expect("one entry per name"))
}

fn multipart_error(e: MultipartError) -> ApiError {
    let status = e.status();
    let code = if status == StatusCode::PAYLOAD_TOO_LARGE {
        "TOO_LARGE"
    } else {
        "BAD_MULTIPART"
    };
    ApiError::new(status, code, e.body_text())
}

fn unprocessable(code: &str, message: impl std::fmt::Display) -> ApiError {
    ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, code, message.to_string())
}

fn utf8<'a>(part: &'a [u8], name: &str) -> ApiResult<&'a str> {
    std::str::from_utf8(part)
        .map_err(|_| unprocessable("MALFORMED", format!("`{name}` is not UTF-8 text")))
}

async fn create_job(
    State(state): State<AppState>,
    multipart: Result<Multipart, MultipartRejection>,
) -> ApiResult<Response> {
    let [contours, meta] = read_parts(multipart, ["contours", "meta"]).await?;
    // an unusable upload is rejected as a whole; the specific code goes in the message
    load_contours(utf8(&contours, "contours")?, utf8(&meta, "meta")?)
        .map_err(|e| unprocessable("MALFORMED", format!("{}: {e}", e.code())))?;
    let job = state
        .store
        .create(&contours, &meta)
        .map_err(ApiError::internal)?;
    tracing::info!(job = job.id(), "job created");
    Ok((StatusCode::CREATED, Json(json!({"job_id": job.id()}))).into_response())
}

#[derive(Debug, Default, Deserialize)]
struct MaskParams {
    #[serde(default)]
    lenient: bool,
    fg_value: Option<u8>,
}

async fn start_mask(
    State(state): State<AppState>,
    UrlPath(id): UrlPath<String>,
    params: Result<Query<MaskParams>, QueryRejection>,
) -> ApiResult<Response> {
    let job = state
        .store
        .get(&id)
        .ok_or_else(|| ApiError::not_found("job"))?;
    let Query(params) = params
        .map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, "INVALID_PARAMETER", e.body_text()))?;
    let foreground = params.fg_value.unwrap_or(Mask::DEFAULT_FOREGROUND);
    if foreground == 0 {
        return Err(ApiError::new(
            StatusCode::BAD_REQUEST,
            "INVALID_PARAMETER",
            "fg_value must be 1..=255",
        ));
    }
    if !job.try_start() {
        return Err(ApiError::new(
            StatusCode::CONFLICT,
            "WRONG_STATE",
            format!(
                "job is {:?}, mask generation needs a created job",
                job.state()
            ),
        ));
    }
    let options = RasterOptions {
        lenient: params.lenient,
        foreground,
        ..RasterOptions::default()
    };
    state.store.spawn_mask(job.clone(), options);
    tracing::info!(job = job.id(), "mask generation started");
    Ok((
        StatusCode::ACCEPTED,
        Json(json!({"job_id": job.id(), "state": "running"})),
    )
        .into_response())
}

async fn progress(
    State(state): State<AppState>,
    UrlPath(id): UrlPath<String>,
) -> ApiResult<Response> {
    let job = state
        .store
        .get(&id)
        .ok_or_else(|| ApiError::not_found("job"))?;
    Ok(Json(job.status()).into_response())
}

async fn download_mask(
    State(state): State<AppState>,
    UrlPath(id): UrlPath<String>,
) -> ApiResult<Response> {
    let job = state
        .store
        .get(&id)
        .ok_or_else(|| ApiError::not_found("job"))?;
    if job.state() != JobState::Done {
        return Err(ApiError::new(
            StatusCode::CONFLICT,
            "NOT_READY",
            "mask is not finished",
        ));
    }
    let bytes = tokio::fs::read(job.mask_path())
        .await
        .map_err(|_| ApiError::not_found("mask"))?;
    Ok(nrrd_response(bytes, "mask.nrrd"))
}

fn nrrd_response(bytes: Vec<u8>, filename: &str) -> Response {
    (
        [
            (header::CONTENT_TYPE, "application/octet-stream".to_string()),
            (
                header::CONTENT_DISPOSITION,
                format!("attachment; filename=\"{filename}\""),
            ),
        ],
        Body::from(bytes),
    )
        .into_response()
}

async fn metrics(multipart: Result<Multipart, MultipartRejection>) -> ApiResult<Response> {
    let [a, b] = read_parts(multipart, ["a", "b"]).await?;
    let report = tokio::task::spawn_blocking(move || {
        let a = load_mask(&a).map_err(|e| unprocessable(e.code(), format!("mask a: {e}")))?;
        let b = load_mask(&b).map_err(|e| unprocessable(e.code(), format!("mask b: {e}")))?;
        build_report(&a, &b).map_err(|e| match e {
            MetricsError::GeometryMismatch => {
                ApiError::new(StatusCode::CONFLICT, e.code(), e.to_string())
            }
            MetricsError::EmptyMask => unprocessable(e.code(), e),
        })
    })
    .await
    .map_err(ApiError::internal)??;
    Ok(Json(report).into_response())
}

async fn convert(multipart: Result<Multipart, MultipartRejection>) -> ApiResult<Response> {
    let [volume] = read_parts(multipart, ["volume"]).await?;
    let out = tokio::task::spawn_blocking(move || reorient_file(&volume))
        .await
        .map_err(ApiError::internal)?
        .map_err(|e| unprocessable(e.code(), e))?;
    Ok(nrrd_response(out, "volume_ras.nrrd"))
}
