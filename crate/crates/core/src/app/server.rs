use std::net::TcpListener;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Deserialize;
use serde_json::json;

use super::engine::{Engine, SystemMode};
use crate::error::{Error, Result};

#[derive(Debug, Deserialize)]
struct AskRequest {
    question: String,
}

fn error(status: StatusCode, message: impl Into<String>) -> Response {
    (status, Json(json!({ "error": message.into() }))).into_response()
}

async fn health() -> Json<serde_json::Value> {
    Json(json!({ "status": "ok" }))
}

async fn ask(State(engine): State<Arc<Engine>>, body: Bytes) -> Response {
    let req: AskRequest = match serde_json::from_slice(&body) {
        Ok(r) => r,
        Err(e) => return error(StatusCode::BAD_REQUEST, format!("invalid request body: {e}")),
    };
    if req.question.trim().is_empty() {
        return error(StatusCode::BAD_REQUEST, "empty question");
    }
    // remote model calls block, so answering runs off the async workers
    match tokio::task::spawn_blocking(move || engine.respond(&req.question, SystemMode::Hybrid)).await {
        Ok(Ok(resp)) => Json(resp).into_response(),
        Ok(Err(e)) => error(StatusCode::BAD_REQUEST, e.to_string()),
        Err(e) => error(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()),
    }
}

pub fn router(engine: Arc<Engine>) -> Router {
    Router::new().route("/health", get(health)).route("/ask", post(ask)).with_state(engine)
}

/// Serves on an already bound listener until the process stops. Build the
/// engine before calling this; its construction may block on remote services.
pub fn serve_on(listener: TcpListener, engine: Arc<Engine>) -> Result<()> {
    listener.set_nonblocking(true)?;
    let rt = tokio::runtime::Builder::new_multi_thread().enable_all().build()?;
    rt.block_on(async move {
        let listener = tokio::net::TcpListener::from_std(listener)?;
        axum::serve(listener, router(engine)).await
    })
    .map_err(Error::from)
}

pub fn serve(engine: Arc<Engine>, port: u16) -> Result<()> {
    let listener = TcpListener::bind(("0.0.0.0", port))?;
    log::info!("listening on {}", listener.local_addr()?);
    serve_on(listener, engine)
}
