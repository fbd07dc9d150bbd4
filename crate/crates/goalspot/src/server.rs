//! Read-only HTTP query service.
//!
//! - `POST /v1/query` takes a [`QueryRequest`] and returns a [`QueryResponse`]
//! - `GET /v1/goals/{id}` returns a goal card
//! - `GET /v1/kb/stats` returns counts, leak and scale
//! - `GET /v1/health` returns `{"ok": true}`
//!
//! Errors are `{"error": message}` with status 400 or 404.

use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use goalspot_core::KnowledgeBase;
use serde_json::json;
use tokio::net::TcpListener;
use tower_http::cors::CorsLayer;

use crate::api::{answer, goal_card, kb_stats, QueryRequest};

fn error(status: StatusCode, message: impl Into<String>) -> Response {
    (status, Json(json!({ "error": message.into() }))).into_response()
}

async fn query(State(kb): State<Arc<KnowledgeBase>>, body: Bytes) -> Response {
    let request: QueryRequest = match serde_json::from_slice(&body) {
        Ok(r) => r,
        Err(e) => return error(StatusCode::BAD_REQUEST, format!("malformed request: {e}")),
    };
    match answer(&kb, &request) {
        Ok(response) => Json(response).into_response(),
        Err(e) => error(StatusCode::BAD_REQUEST, e.to_string()),
    }
}

async fn goal(State(kb): State<Arc<KnowledgeBase>>, Path(id): Path<String>) -> Response {
    match goal_card(&kb, &id) {
        Some(card) => Json(card).into_response(),
        None => error(StatusCode::NOT_FOUND, format!("no goal with id '{id}'")),
    }
}

async fn stats(State(kb): State<Arc<KnowledgeBase>>) -> Response {
    Json(kb_stats(&kb)).into_response()
}

async fn health() -> Response {
    Json(json!({ "ok": true })).into_response()
}

async fn not_found() -> Response {
    error(StatusCode::NOT_FOUND, "no such endpoint")
}

pub fn router(kb: Arc<KnowledgeBase>) -> Router {
    Router::new()
        .route("/v1/query", post(query))
        .route("/v1/goals/{id}", get(goal))
        .route("/v1/kb/stats", get(stats))
        .route("/v1/health", get(health))
        .fallback(not_found)
        .layer(CorsLayer::permissive())
        .with_state(kb)
}

/// Serves until ctrl-c.
pub async fn serve(kb: Arc<KnowledgeBase>, listener: TcpListener) -> std::io::Result<()> {
    axum::serve(listener, router(kb))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
