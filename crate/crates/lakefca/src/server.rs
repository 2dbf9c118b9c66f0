//! HTTP JSON API over a [`SessionStore`].
//!
//! Every response about a session carries its version in `X-Context-Version`;
//! mutations must send the version they were based on in the same header.

use std::net::SocketAddr;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderMap, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use lakefca_core::{coverage_curve, FormalContext, LatticeError, OpOutcome, TransformOp};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::export::{
    context_json, coverage_value, export_lattice, preview_value, report_value, to_json, ContextDocument, LabelMode,
    LatticeFormat,
};
use crate::ingest::{load_context, parse_csv_crosstable, parse_cxt, write_csv_crosstable, write_cxt};
use crate::session::{Session, SessionError, SessionStore, Snapshot};

pub const VERSION_HEADER: &str = "x-context-version";

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    kind: &'static str,
    reason: String,
}

impl ApiError {
    fn bad_request(kind: &'static str, reason: impl Into<String>) -> Self {
        ApiError {
            status: StatusCode::BAD_REQUEST,
            kind,
            reason: reason.into(),
        }
    }
}

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        let (status, kind) = match &e {
            SessionError::NotFound(_) => (StatusCode::NOT_FOUND, "not_found"),
            SessionError::AlreadyExists(_) => (StatusCode::CONFLICT, "already_exists"),
            SessionError::StaleVersion { .. } => (StatusCode::CONFLICT, "stale_version"),
            SessionError::EmptyHistory => (StatusCode::CONFLICT, "empty_history"),
            SessionError::Rejected(_) => (StatusCode::UNPROCESSABLE_ENTITY, "rejected"),
            SessionError::Lattice(LatticeError::ResourceLimitExceeded { .. }) => {
                (StatusCode::UNPROCESSABLE_ENTITY, "resource_limit")
            }
            SessionError::Lattice(_) | SessionError::Journal { .. } | SessionError::Io(_) => {
                (StatusCode::INTERNAL_SERVER_ERROR, "internal")
            }
        };
        ApiError {
            status,
            kind,
            reason: e.to_string(),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = json!({"error": self.kind, "reason": self.reason});
        (
            self.status,
            [(header::CONTENT_TYPE, "application/json")],
            to_json(&body),
        )
            .into_response()
    }
}

type ApiResult = Result<Response, ApiError>;
type AppState = Arc<SessionStore>;

pub fn router(store: AppState) -> Router {
    Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/{id}/context", get(get_context))
        .route("/sessions/{id}/lattice", get(get_lattice))
        .route("/sessions/{id}/coverage", get(get_coverage))
        .route("/sessions/{id}/stats", get(get_stats))
        .route("/sessions/{id}/history", get(get_history))
        .route("/sessions/{id}/export", get(get_export))
        .route("/sessions/{id}/transforms", post(post_transform))
        .route("/sessions/{id}/transforms/preview", post(post_preview))
        .route("/sessions/{id}/undo", post(post_undo))
        .with_state(store)
}

/// Serves until ctrl-c.
pub async fn serve(store: SessionStore, addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(Arc::new(store)))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}

fn versioned(status: StatusCode, version: u64, content_type: &'static str, body: String) -> Response {
    let mut res = (status, [(header::CONTENT_TYPE, content_type)], body).into_response();
    res.headers_mut().insert(VERSION_HEADER, HeaderValue::from(version));
    res
}

fn json_response(status: StatusCode, version: u64, body: &Value) -> Response {
    versioned(status, version, "application/json", to_json(body))
}

fn snapshot(store: &SessionStore, id: &str) -> Result<Arc<Snapshot>, ApiError> {
    Ok(store.get(id)?.snapshot())
}

fn version_token(headers: &HeaderMap) -> Result<u64, ApiError> {
    let raw = headers
        .get(VERSION_HEADER)
        .ok_or_else(|| ApiError::bad_request("missing_version", "X-Context-Version header is required"))?;
    raw.to_str()
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| ApiError::bad_request("bad_version", "X-Context-Version must be an unsigned integer"))
}

fn parse_op(body: &[u8]) -> Result<TransformOp, ApiError> {
    let op: TransformOp =
        serde_json::from_slice(body).map_err(|e| ApiError::bad_request("malformed_op", e.to_string()))?;
    op.validate()
        .map_err(|e| ApiError::bad_request("malformed_op", e.to_string()))?;
    Ok(op)
}

async fn blocking<T: Send + 'static>(f: impl FnOnce() -> Result<T, ApiError> + Send + 'static) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f).await.map_err(|e| ApiError {
        status: StatusCode::INTERNAL_SERVER_ERROR,
        kind: "internal",
        reason: e.to_string(),
    })?
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CreateRequest {
    cxt: Option<String>,
    csv: Option<String>,
    path: Option<String>,
    context: Option<ContextDocument>,
}

impl CreateRequest {
    fn into_context(self) -> Result<FormalContext, ApiError> {
        let bad = |e: &dyn std::fmt::Display| ApiError::bad_request("bad_context", e.to_string());
        match (self.cxt, self.csv, self.path, self.context) {
            (Some(text), None, None, None) => parse_cxt(&text).map_err(|e| bad(&e)),
            (None, Some(text), None, None) => parse_csv_crosstable(&text).map_err(|e| bad(&e)),
            (None, None, Some(path), None) => load_context(std::path::Path::new(&path)).map_err(|e| bad(&e)),
            (None, None, None, Some(doc)) => doc.into_context().map_err(|e| bad(&e)),
            _ => Err(ApiError::bad_request(
                "bad_request",
                "exactly one of cxt, csv, path or context is required",
            )),
        }
    }
}

async fn create_session(State(store): State<AppState>, body: Bytes) -> ApiResult {
    let req: CreateRequest =
        serde_json::from_slice(&body).map_err(|e| ApiError::bad_request("bad_request", e.to_string()))?;
    let session: Arc<Session> = blocking(move || {
        let ctx = req.into_context()?;
        Ok(store.create(ctx)?)
    })
    .await?;
    let snap = session.snapshot();
    let body = json!({"id": session.id(), "version": snap.version, "stats": snap.stats});
    Ok(json_response(StatusCode::CREATED, snap.version, &body))
}

async fn get_context(State(store): State<AppState>, Path(id): Path<String>) -> ApiResult {
    let snap = snapshot(&store, &id)?;
    Ok(versioned(
        StatusCode::OK,
        snap.version,
        "application/json",
        context_json(&snap.context),
    ))
}

#[derive(Deserialize)]
struct LatticeQuery {
    labels: Option<String>,
    format: Option<String>,
}

async fn get_lattice(
    State(store): State<AppState>,
    Path(id): Path<String>,
    Query(q): Query<LatticeQuery>,
) -> ApiResult {
    let mode: LabelMode = q
        .labels
        .as_deref()
        .map(str::parse)
        .transpose()
        .map_err(|e: crate::Error| ApiError::bad_request("bad_query", e.to_string()))?
        .unwrap_or_default();
    let format: LatticeFormat = q
        .format
        .as_deref()
        .unwrap_or("json")
        .parse()
        .map_err(|e: crate::Error| ApiError::bad_request("bad_query", e.to_string()))?;
    let snap = snapshot(&store, &id)?;
    let body = export_lattice(&snap.context, &snap.lattice, &snap.labels, format, mode);
    let content_type = match format {
        LatticeFormat::Json => "application/json",
        LatticeFormat::Dot => "text/vnd.graphviz",
    };
    Ok(versioned(StatusCode::OK, snap.version, content_type, body))
}

async fn get_coverage(State(store): State<AppState>, Path(id): Path<String>) -> ApiResult {
    let snap = snapshot(&store, &id)?;
    let report = coverage_curve(&snap.context);
    Ok(json_response(
        StatusCode::OK,
        snap.version,
        &coverage_value(&snap.context, &report),
    ))
}

async fn get_stats(State(store): State<AppState>, Path(id): Path<String>) -> ApiResult {
    let snap = snapshot(&store, &id)?;
    Ok(versioned(
        StatusCode::OK,
        snap.version,
        "application/json",
        to_json(&snap.stats),
    ))
}

async fn get_history(State(store): State<AppState>, Path(id): Path<String>) -> ApiResult {
    let session = store.get(&id)?;
    let script = session.history();
    Ok(versioned(
        StatusCode::OK,
        session.version(),
        "application/json",
        to_json(&script),
    ))
}

#[derive(Deserialize)]
struct ExportQuery {
    format: Option<String>,
    labels: Option<String>,
}

async fn get_export(State(store): State<AppState>, Path(id): Path<String>, Query(q): Query<ExportQuery>) -> ApiResult {
    let snap = snapshot(&store, &id)?;
    let format = q.format.as_deref().unwrap_or("cxt");
    let internal = |e: crate::IngestError| ApiError {
        status: StatusCode::UNPROCESSABLE_ENTITY,
        kind: "unrepresentable",
        reason: e.to_string(),
    };
    let (content_type, body) = match format {
        "cxt" => ("text/plain; charset=utf-8", write_cxt(&snap.context).map_err(internal)?),
        "csv" => ("text/csv", write_csv_crosstable(&snap.context).map_err(internal)?),
        "json" | "dot" => {
            let mode: LabelMode = q
                .labels
                .as_deref()
                .map(str::parse)
                .transpose()
                .map_err(|e: crate::Error| ApiError::bad_request("bad_query", e.to_string()))?
                .unwrap_or_default();
            let lf: LatticeFormat = format.parse().expect("matched above");
            let ct = if lf == LatticeFormat::Json {
                "application/json"
            } else {
                "text/vnd.graphviz"
            };
            (ct, export_lattice(&snap.context, &snap.lattice, &snap.labels, lf, mode))
        }
        other => {
            return Err(ApiError::bad_request(
                "unsupported_format",
                format!("unsupported format {other:?}"),
            ))
        }
    };
    Ok(versioned(StatusCode::OK, snap.version, content_type, body))
}

async fn post_transform(
    State(store): State<AppState>,
    Path(id): Path<String>,
    headers: HeaderMap,
    body: Bytes,
) -> ApiResult {
    let session = store.get(&id)?;
    let given = version_token(&headers)?;
    let op = parse_op(&body)?;
    let (snap, report) = blocking(move || Ok(session.apply(given, op)?)).await?;
    let body = json!({"version": snap.version, "report": report_value(&report), "stats": snap.stats});
    Ok(json_response(StatusCode::OK, snap.version, &body))
}

async fn post_preview(State(store): State<AppState>, Path(id): Path<String>, body: Bytes) -> ApiResult {
    let session = store.get(&id)?;
    let op = parse_op(&body)?;
    let version = session.version();
    let preview = blocking(move || Ok(session.preview(&op)?)).await?;
    if let Some(OpOutcome::Rejected(e)) = preview.report.outcomes.first() {
        return Err(SessionError::Rejected(e.clone()).into());
    }
    Ok(json_response(StatusCode::OK, version, &preview_value(&preview)))
}

async fn post_undo(State(store): State<AppState>, Path(id): Path<String>, headers: HeaderMap) -> ApiResult {
    let session = store.get(&id)?;
    let given = version_token(&headers)?;
    let snap = blocking(move || Ok(session.undo(given)?)).await?;
    let body = json!({"version": snap.version, "stats": snap.stats});
    Ok(json_response(StatusCode::OK, snap.version, &body))
}
