//! Read-only JSON API over a navigator index.
//!
//! Endpoints:
//! - `GET /api/metrics`
//! - `GET /api/metrics/{metric}/topics`
//! - `GET /api/metrics/{metric}/topics/{id}/documents?limit=N`
//! - `GET /api/metrics/{metric}/cloud`
//! - `GET /api/documents/{doc_id}`
//!
//! Errors are `{"error": "..."}` with a 4xx status. Document lists come from
//! theta alone, so they are identical under every metric.

use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use axum::extract::{Path as UrlPath, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use serde::Serialize;
use tokio::io::{AsyncReadExt, AsyncSeekExt};
use topikrank_core::corpus::text_store_path;
use topikrank_core::index::{MetricIndex, NavigatorIndex};
use topikrank_core::layout::TopicCloudLayout;
use topikrank_core::ranking::RankedTopic;
use topikrank_core::{io, SimilarityMetric};

pub const MAX_DOCUMENTS: usize = 100;
pub const SNIPPET_CHARS: usize = 200;

#[derive(Debug, thiserror::Error)]
pub enum ServerError {
    #[error(transparent)]
    Core(#[from] topikrank_core::Error),
    #[error("{0}")]
    Mismatch(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub index_path: PathBuf,
    pub corpus_path: PathBuf,
    pub bind: SocketAddr,
    pub static_dir: Option<PathBuf>,
}

/// Everything a request handler reads. Immutable after startup.
#[derive(Debug)]
pub struct AppState {
    pub index: NavigatorIndex,
    pub text_path: PathBuf,
}

impl AppState {
    /// Loads the index and checks it was built from `corpus_path` and its
    /// text store.
    pub fn load(index_path: &Path, corpus_path: &Path) -> Result<Self, ServerError> {
        let index = NavigatorIndex::load(index_path)?;
        let corpus_hash = io::fingerprint(&io::read_bytes(corpus_path)?);
        if corpus_hash != index.corpus_hash {
            return Err(ServerError::Mismatch(format!(
                "{} does not match the index (corpus {corpus_hash}, index {})",
                corpus_path.display(),
                index.corpus_hash
            )));
        }
        let text_path = text_store_path(corpus_path);
        let text_hash = io::fingerprint(&io::read_bytes(&text_path)?);
        if text_hash != index.text_hash {
            return Err(ServerError::Mismatch(format!("{} does not match the index", text_path.display())));
        }
        Ok(Self { index, text_path })
    }
}

pub struct ApiError {
    status: StatusCode,
    message: String,
}

impl ApiError {
    fn not_found(message: impl Into<String>) -> Self {
        Self { status: StatusCode::NOT_FOUND, message: message.into() }
    }

    fn bad_request(message: impl Into<String>) -> Self {
        Self { status: StatusCode::BAD_REQUEST, message: message.into() }
    }

    fn internal(message: impl Into<String>) -> Self {
        Self { status: StatusCode::INTERNAL_SERVER_ERROR, message: message.into() }
    }
}

#[derive(Serialize)]
struct ErrorBody {
    error: String,
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(ErrorBody { error: self.message })).into_response()
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

#[derive(Debug, Serialize)]
pub struct DocumentHit {
    pub doc_id: usize,
    pub author_id: String,
    pub probability: f64,
    pub snippet: String,
}

#[derive(Debug, Serialize)]
pub struct DocumentText {
    pub doc_id: usize,
    pub author_id: String,
    pub text: String,
}

fn metric<'a>(state: &'a AppState, name: &str) -> Result<&'a MetricIndex, ApiError> {
    let m: SimilarityMetric = name.parse().map_err(|_| ApiError::not_found(format!("unknown metric {name:?}")))?;
    state
        .index
        .metric(m)
        .ok_or_else(|| ApiError::not_found(format!("metric {name:?} is not in this index")))
}

fn parse_id(raw: &str, size: usize, what: &str) -> Result<usize, ApiError> {
    raw.parse::<usize>()
        .ok()
        .filter(|&i| i < size)
        .ok_or_else(|| ApiError::not_found(format!("unknown {what} {raw:?}")))
}

async fn read_text(state: &AppState, doc_id: usize) -> Result<String, ApiError> {
    let span = state.index.documents[doc_id].text;
    let mut f = tokio::fs::File::open(&state.text_path)
        .await
        .map_err(|e| ApiError::internal(format!("text store: {e}")))?;
    f.seek(std::io::SeekFrom::Start(span.offset))
        .await
        .map_err(|e| ApiError::internal(format!("text store: {e}")))?;
    let mut buf = vec![0u8; span.len as usize];
    f.read_exact(&mut buf)
        .await
        .map_err(|e| ApiError::internal(format!("text store: {e}")))?;
    Ok(String::from_utf8_lossy(&buf).into_owned())
}

async fn list_metrics(State(state): State<Arc<AppState>>) -> Json<Vec<&'static str>> {
    Json(state.index.metrics.iter().map(|m| m.metric.name()).collect())
}

async fn list_topics(State(state): State<Arc<AppState>>, UrlPath(name): UrlPath<String>) -> ApiResult<Vec<RankedTopic>> {
    Ok(Json(metric(&state, &name)?.topics.clone()))
}

async fn topic_documents(
    State(state): State<Arc<AppState>>,
    UrlPath((name, id)): UrlPath<(String, String)>,
    Query(params): Query<HashMap<String, String>>,
) -> ApiResult<Vec<DocumentHit>> {
    metric(&state, &name)?;
    let topic = parse_id(&id, state.index.topics, "topic")?;
    let limit = match params.get("limit") {
        None => MAX_DOCUMENTS,
        Some(raw) => match raw.parse::<usize>() {
            Ok(n) if n >= 1 => n.min(MAX_DOCUMENTS),
            _ => return Err(ApiError::bad_request(format!("limit must be a positive integer, got {raw:?}"))),
        },
    };
    let mut hits = Vec::new();
    for r in state.index.topic_documents[topic].iter().take(limit) {
        let text = read_text(&state, r.doc_id).await?;
        hits.push(DocumentHit {
            doc_id: r.doc_id,
            author_id: state.index.documents[r.doc_id].author_id.clone(),
            probability: r.probability,
            snippet: text.chars().take(SNIPPET_CHARS).collect(),
        });
    }
    Ok(Json(hits))
}

async fn topic_cloud(State(state): State<Arc<AppState>>, UrlPath(name): UrlPath<String>) -> ApiResult<TopicCloudLayout> {
    Ok(Json(metric(&state, &name)?.cloud.clone()))
}

async fn document(State(state): State<Arc<AppState>>, UrlPath(id): UrlPath<String>) -> ApiResult<DocumentText> {
    let doc_id = parse_id(&id, state.index.num_documents(), "document")?;
    Ok(Json(DocumentText {
        doc_id,
        author_id: state.index.documents[doc_id].author_id.clone(),
        text: read_text(&state, doc_id).await?,
    }))
}

async fn api_not_found() -> ApiError {
    ApiError::not_found("no such endpoint")
}

pub fn router(state: Arc<AppState>, static_dir: Option<&Path>) -> Router {
    let api = Router::new()
        .route("/api/metrics", get(list_metrics))
        .route("/api/metrics/{metric}/topics", get(list_topics))
        .route("/api/metrics/{metric}/topics/{id}/documents", get(topic_documents))
        .route("/api/metrics/{metric}/cloud", get(topic_cloud))
        .route("/api/documents/{doc_id}", get(document))
        .route("/api", get(api_not_found))
        .route("/api/{*rest}", get(api_not_found))
        .with_state(state);
    match static_dir {
        Some(dir) => api.fallback_service(tower_http::services::ServeDir::new(dir)),
        None => api.fallback(api_not_found),
    }
}

/// Binds and serves until the process is stopped.
pub async fn serve(config: ServiceConfig) -> Result<(), ServerError> {
    let state = Arc::new(AppState::load(&config.index_path, &config.corpus_path)?);
    let app = router(state, config.static_dir.as_deref());
    let listener = tokio::net::TcpListener::bind(config.bind).await?;
    eprintln!("stage=serve addr={}", listener.local_addr()?);
    axum::serve(listener, app).await?;
    Ok(())
}
