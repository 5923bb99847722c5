//! Request handling and HTTP/WebSocket routing.

use std::sync::Arc;

use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use reflector::reasoner::FEATURE_VECTOR_VERSION;
use reflector::{AnalyzeError, Engine};
use serde::Serialize;
use tokio::sync::Semaphore;

use crate::config::ServiceConfig;
use crate::protocol::{AnalyzeRequest, ClientMessage, ErrorCode, FeedbackMessage, ServerMessage};
use crate::store::{now_millis, NewReflection, Page, ReflectionStore};

/// Version string stored with every reflection.
pub fn pipeline_version() -> String {
    format!("{}+v{}", env!("CARGO_PKG_VERSION"), FEATURE_VECTOR_VERSION)
}

/// Everything a request needs, loaded once at startup.
#[derive(Clone)]
pub struct AppState {
    pub engine: Arc<Engine>,
    pub store: Arc<dyn ReflectionStore>,
    workers: Arc<Semaphore>,
    max_text_chars: usize,
}

impl AppState {
    pub fn new(
        engine: Arc<Engine>,
        store: Arc<dyn ReflectionStore>,
        workers: usize,
        max_text_chars: usize,
    ) -> Self {
        AppState {
            engine,
            store,
            workers: Arc::new(Semaphore::new(workers.max(1))),
            max_text_chars,
        }
    }

    pub fn from_config(
        config: &ServiceConfig,
        engine: Arc<Engine>,
        store: Arc<dyn ReflectionStore>,
    ) -> Self {
        Self::new(engine, store, config.worker_count(), config.max_text_chars)
    }

    /// Validates, analyzes on the worker pool and persists one request.
    pub async fn handle_analyze(&self, request: AnalyzeRequest) -> ServerMessage {
        let chars = request.text.chars().count();
        if chars > self.max_text_chars {
            return ServerMessage::error(
                ErrorCode::TextTooLong,
                format!("text has {chars} characters, the limit is {}", self.max_text_chars),
            );
        }
        let Ok(_permit) = self.workers.clone().acquire_owned().await else {
            return ServerMessage::error(ErrorCode::Overloaded, "worker pool closed");
        };
        let engine = self.engine.clone();
        let text = request.text.clone();
        let options = request.options();
        let outcome = tokio::task::spawn_blocking(move || engine.analyze(&text, &options)).await;
        let response = match outcome {
            Ok(Ok(response)) => response,
            Ok(Err(AnalyzeError::GateRejected(gate))) => {
                return ServerMessage::RevisionRequest { reasons: gate.reasons }
            }
            Ok(Err(e @ AnalyzeError::Backend { .. })) => {
                tracing::error!(error = %e, "backend failure");
                return ServerMessage::error(ErrorCode::BackendFailure, e.to_string());
            }
            Ok(Err(e @ (AnalyzeError::Text(_) | AnalyzeError::Linguistic(_)))) => {
                return ServerMessage::error(ErrorCode::UnsupportedInput, e.to_string());
            }
            Ok(Err(e)) => {
                tracing::error!(error = %e, "analysis failed");
                return ServerMessage::error(ErrorCode::Internal, e.to_string());
            }
            Err(e) => {
                tracing::error!(error = %e, "analysis task panicked");
                return ServerMessage::error(ErrorCode::Internal, "analysis task failed");
            }
        };

        let new = NewReflection {
            author_id: request.author().to_string(),
            text: request.text,
            response: response.clone(),
            submitted_at: request.submitted_at.unwrap_or_else(now_millis),
            pipeline_version: pipeline_version(),
        };
        let store = self.store.clone();
        let id = match tokio::task::spawn_blocking(move || store.append(new)).await {
            Ok(Ok(stored)) => Some(stored.id),
            Ok(Err(e)) => {
                tracing::warn!(error = %e, "reflection not persisted");
                None
            }
            Err(e) => {
                tracing::warn!(error = %e, "store task failed");
                None
            }
        };
        ServerMessage::Feedback(FeedbackMessage::new(response, id))
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/ws", get(ws_upgrade))
        .route("/api/analyze", post(analyze_http))
        .route("/api/history/{author}", get(history))
        .route("/api/health", get(health))
        .with_state(state)
}

fn status_of(message: &ServerMessage) -> StatusCode {
    match message {
        ServerMessage::Feedback(_) => StatusCode::OK,
        ServerMessage::RevisionRequest { .. } => StatusCode::UNPROCESSABLE_ENTITY,
        ServerMessage::Error { code, .. } => match code {
            ErrorCode::InvalidRequest | ErrorCode::UnsupportedInput => StatusCode::BAD_REQUEST,
            ErrorCode::TextTooLong => StatusCode::PAYLOAD_TOO_LARGE,
            ErrorCode::Overloaded => StatusCode::SERVICE_UNAVAILABLE,
            ErrorCode::BackendFailure | ErrorCode::Internal => StatusCode::INTERNAL_SERVER_ERROR,
        },
    }
}

/// Accepts the bare request or the WebSocket envelope with `"type"`.
fn parse_request(body: &str) -> Result<AnalyzeRequest, String> {
    match serde_json::from_str::<ClientMessage>(body) {
        Ok(ClientMessage::Analyze(request)) => Ok(request),
        Err(envelope_err) => serde_json::from_str::<AnalyzeRequest>(body).map_err(|bare_err| {
            if body.contains("\"type\"") {
                envelope_err.to_string()
            } else {
                bare_err.to_string()
            }
        }),
    }
}

async fn analyze_http(State(state): State<AppState>, body: String) -> Response {
    let message = match parse_request(&body) {
        Ok(request) => state.handle_analyze(request).await,
        Err(e) => ServerMessage::error(ErrorCode::InvalidRequest, e),
    };
    (status_of(&message), Json(message)).into_response()
}

async fn history(
    State(state): State<AppState>,
    Path(author): Path<String>,
    Query(page): Query<Page>,
) -> Response {
    let store = state.store.clone();
    match tokio::task::spawn_blocking(move || store.history(&author, page)).await {
        Ok(Ok(items)) => Json(items).into_response(),
        Ok(Err(e)) => (
            StatusCode::SERVICE_UNAVAILABLE,
            Json(ServerMessage::error(ErrorCode::Internal, e.to_string())),
        )
            .into_response(),
        Err(_) => StatusCode::INTERNAL_SERVER_ERROR.into_response(),
    }
}

#[derive(Serialize)]
struct Health {
    status: &'static str,
    version: String,
    counters: reflector::engine::EngineCounters,
}

async fn health(State(state): State<AppState>) -> Json<Health> {
    Json(Health { status: "ok", version: pipeline_version(), counters: state.engine.counters() })
}

async fn ws_upgrade(State(state): State<AppState>, ws: WebSocketUpgrade) -> Response {
    ws.on_upgrade(move |socket| ws_session(socket, state))
}

async fn ws_session(mut socket: WebSocket, state: AppState) {
    while let Some(Ok(message)) = socket.recv().await {
        let reply = match message {
            Message::Text(text) => match serde_json::from_str::<ClientMessage>(text.as_str()) {
                Ok(ClientMessage::Analyze(request)) => state.handle_analyze(request).await,
                Err(e) => ServerMessage::error(ErrorCode::InvalidRequest, e.to_string()),
            },
            Message::Close(_) => break,
            _ => continue,
        };
        let Ok(json) = serde_json::to_string(&reply) else { break };
        if socket.send(Message::Text(json.into())).await.is_err() {
            break;
        }
    }
}
