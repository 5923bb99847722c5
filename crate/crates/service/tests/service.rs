use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use futures::{SinkExt, StreamExt};
use http_body_util::BodyExt;
use reflector::Engine;
use reflector_service::protocol::{AnalyzeRequest, ErrorCode, ServerMessage};
use reflector_service::store::{
    NewReflection, Page, ReflectionStore, ReflectionSummary, StoreError, StoredReflection,
};
use reflector_service::{router, AppState, JsonlStore};
use tower::ServiceExt;

const ESSAY: &str = "Letzte Woche habe ich zum ersten Mal eine Unterrichtsstunde gehalten. \
Ich war sehr nervös, aber auch neugierig. \
Die Gruppenarbeit hat gut funktioniert, weil die Aufgaben klar waren. \
Beim nächsten Mal werde ich einen genaueren Zeitplan erstellen.";

fn state(dir: &tempfile::TempDir) -> AppState {
    let engine = Arc::new(Engine::bundled().unwrap());
    let store = Arc::new(JsonlStore::open(dir.path().join("history.jsonl")).unwrap());
    AppState::new(engine, store, 4, 50_000)
}

async fn call(app: &axum::Router, method: &str, uri: &str, body: &str) -> (StatusCode, serde_json::Value) {
    let request = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(Body::from(body.to_string()))
        .unwrap();
    let response = app.clone().oneshot(request).await.unwrap();
    let status = response.status();
    let bytes = response.into_body().collect().await.unwrap().to_bytes();
    (status, serde_json::from_slice(&bytes).unwrap())
}

#[tokio::test]
async fn http_analyze_returns_feedback_and_persists() {
    let dir = tempfile::tempdir().unwrap();
    let app = router(state(&dir));
    let body = serde_json::json!({"type": "analyze", "text": ESSAY, "seed": 3, "author": "kim"});
    let (status, json) = call(&app, "POST", "/api/analyze", &body.to_string()).await;
    assert_eq!(status, StatusCode::OK, "{json}");
    assert_eq!(json["type"], "feedback");
    assert_eq!(json["vector"].as_array().unwrap().len(), 12);
    assert_eq!(json["language"], "de");
    assert_eq!(json["persisted"], true);

    let (status, history) = call(&app, "GET", "/api/history/kim?include_text=true", "").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(history[0]["text"], ESSAY);
    assert_eq!(history[0]["feedback"], json["text"]);
}

#[tokio::test]
async fn bare_request_without_type_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let app = router(state(&dir));
    let (status, json) = call(&app, "POST", "/api/analyze", &serde_json::json!({"text": ESSAY}).to_string()).await;
    assert_eq!(status, StatusCode::OK, "{json}");
}

#[tokio::test]
async fn short_text_gets_revision_request() {
    let dir = tempfile::tempdir().unwrap();
    let app = router(state(&dir));
    let body = serde_json::json!({"type": "analyze", "text": "Zu kurz."});
    let (status, json) = call(&app, "POST", "/api/analyze", &body.to_string()).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(json["type"], "revision_request");
    assert_eq!(json["reasons"][0]["kind"], "too_short");
}

#[tokio::test]
async fn malformed_and_oversized_requests() {
    let dir = tempfile::tempdir().unwrap();
    let engine = Arc::new(Engine::bundled().unwrap());
    let store = Arc::new(JsonlStore::open(dir.path().join("h.jsonl")).unwrap());
    let app = router(AppState::new(engine, store, 1, 100));
    let (status, json) = call(&app, "POST", "/api/analyze", "{\"txt\": 1}").await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(json["code"], "invalid_request");
    let long = serde_json::json!({"text": "a".repeat(101)});
    let (status, json) = call(&app, "POST", "/api/analyze", &long.to_string()).await;
    assert_eq!(status, StatusCode::PAYLOAD_TOO_LARGE);
    assert_eq!(json["code"], "text_too_long");
}

#[tokio::test]
async fn history_is_newest_first_and_paginated() {
    let dir = tempfile::tempdir().unwrap();
    let state = state(&dir);
    for seed in 0..3 {
        let mut request = AnalyzeRequest::new(ESSAY);
        request.author = Some("ana".into());
        request.seed = Some(seed);
        request.submitted_at = Some(1000 + seed);
        assert!(matches!(state.handle_analyze(request).await, ServerMessage::Feedback(_)));
    }
    let app = router(state);
    let (_, first) = call(&app, "GET", "/api/history/ana?limit=2", "").await;
    let (_, second) = call(&app, "GET", "/api/history/ana?limit=2&offset=2", "").await;
    assert_eq!(first.as_array().unwrap().len(), 2);
    assert_eq!(second.as_array().unwrap().len(), 1);
    assert_eq!(first[0]["submitted_at"], 1002);
    assert_eq!(second[0]["submitted_at"], 1000);
    assert!(first[0].get("text").is_none());
    let (_, nobody) = call(&app, "GET", "/api/history/nobody", "").await;
    assert_eq!(nobody, serde_json::json!([]));
}

#[tokio::test]
async fn store_replay_round_trips_responses() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("history.jsonl");
    let engine = Engine::bundled().unwrap();
    let response = engine.analyze(ESSAY, &Default::default()).unwrap();
    let stored = {
        let store = JsonlStore::open(&path).unwrap();
        let new = |author: &str| NewReflection {
            author_id: author.into(),
            text: ESSAY.into(),
            response: response.clone(),
            submitted_at: 1,
            pipeline_version: "test".into(),
        };
        store.append(new("a")).unwrap();
        store.append(new("b")).unwrap()
    };
    let reopened = JsonlStore::open(&path).unwrap();
    assert_eq!(reopened.len(), 2);
    assert_eq!(reopened.get(stored.id).unwrap().unwrap(), stored);
    assert_eq!(reopened.get(stored.id).unwrap().unwrap().response, response);
    let next = reopened
        .append(NewReflection {
            author_id: "a".into(),
            text: ESSAY.into(),
            response,
            submitted_at: 2,
            pipeline_version: "test".into(),
        })
        .unwrap();
    assert_eq!(next.id, stored.id + 1);
}

struct BrokenStore;

impl ReflectionStore for BrokenStore {
    fn append(&self, _: NewReflection) -> Result<StoredReflection, StoreError> {
        Err(StoreError::Unavailable("disk full".into()))
    }
    fn history(&self, _: &str, _: Page) -> Result<Vec<ReflectionSummary>, StoreError> {
        Err(StoreError::Unavailable("disk full".into()))
    }
    fn get(&self, _: u64) -> Result<Option<StoredReflection>, StoreError> {
        Ok(None)
    }
}

#[tokio::test]
async fn storage_failure_still_returns_feedback() {
    let state = AppState::new(Arc::new(Engine::bundled().unwrap()), Arc::new(BrokenStore), 2, 50_000);
    match state.handle_analyze(AnalyzeRequest::new(ESSAY)).await {
        ServerMessage::Feedback(f) => {
            assert!(!f.persisted);
            assert_eq!(f.id, None);
        }
        other => panic!("{other:?}"),
    }
}

#[tokio::test]
async fn health_reports_counters() {
    let dir = tempfile::tempdir().unwrap();
    let state = state(&dir);
    state.handle_analyze(AnalyzeRequest::new("Kurz.")).await;
    let (status, json) = call(&router(state), "GET", "/api/health", "").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(json["counters"]["gate_rejections"], 1);
    assert_eq!(json["counters"]["analyses_started"], 0);
}

#[tokio::test]
async fn websocket_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    let app = router(state(&dir));
    tokio::spawn(async move { axum::serve(listener, app).await.unwrap() });

    let (mut ws, _) = tokio_tungstenite::connect_async(format!("ws://{addr}/ws")).await.unwrap();
    use tokio_tungstenite::tungstenite::Message;
    let send = |v: serde_json::Value| Message::Text(v.to_string().into());
    ws.send(send(serde_json::json!({"type": "analyze", "text": ESSAY, "seed": 1, "lang": "en"})))
        .await
        .unwrap();
    let reply: serde_json::Value =
        serde_json::from_str(ws.next().await.unwrap().unwrap().to_text().unwrap()).unwrap();
    assert_eq!(reply["type"], "feedback");
    assert_eq!(reply["language"], "en");
    assert!(reply["text"].as_str().unwrap().starts_with("Thank you"));

    ws.send(send(serde_json::json!({"type": "analyze", "text": "Nein."}))).await.unwrap();
    let reply: serde_json::Value =
        serde_json::from_str(ws.next().await.unwrap().unwrap().to_text().unwrap()).unwrap();
    assert_eq!(reply["type"], "revision_request");

    ws.send(send(serde_json::json!({"type": "bogus"}))).await.unwrap();
    let reply: ServerMessage =
        serde_json::from_str(ws.next().await.unwrap().unwrap().to_text().unwrap()).unwrap();
    assert!(matches!(reply, ServerMessage::Error { code: ErrorCode::InvalidRequest, .. }));
}
