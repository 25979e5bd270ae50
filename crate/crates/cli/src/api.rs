//! The HTTP service. Every handler parses its input itself so that malformed
//! requests get the same `{error, position?}` body as validation failures.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use axum::body::Bytes;
use axum::extract::rejection::QueryRejection;
use axum::extract::{Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::service::{
    to_wire, ApiError, ApiResult, CombineRequest, InterpretRequest, LawsQuery, Service,
};

struct AppState {
    service: Arc<Service>,
    /// Law reports by query. Runs are deterministic, so this only saves time.
    laws: Mutex<HashMap<String, Arc<str>>>,
}

type Shared = Arc<AppState>;

pub fn router(service: Arc<Service>) -> Router {
    let state = Arc::new(AppState {
        service,
        laws: Mutex::new(HashMap::new()),
    });
    Router::new()
        .route("/api/combine", post(combine))
        .route("/api/interpret", post(interpret))
        .route("/api/fragments", get(fragments))
        .route("/api/laws", get(laws))
        .route("/api/health", get(health))
        .fallback(|| async {
            reply(Err::<(), _>(ApiError {
                status: 404,
                error: "not found".into(),
                position: None,
            }))
        })
        .with_state(state)
}

pub async fn serve(
    listener: tokio::net::TcpListener,
    service: Arc<Service>,
) -> std::io::Result<()> {
    axum::serve(listener, router(service)).await
}

fn json_response(status: u16, body: String) -> Response {
    let status = StatusCode::from_u16(status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
    (status, [(header::CONTENT_TYPE, "application/json")], body).into_response()
}

fn reply<T: Serialize>(result: ApiResult<T>) -> Response {
    match result {
        Ok(v) => json_response(200, to_wire(&v)),
        Err(e) => json_response(e.status, to_wire(&e)),
    }
}

fn parse<T: DeserializeOwned>(body: &[u8]) -> ApiResult<T> {
    serde_json::from_slice(body).map_err(|e| ApiError::bad_request(format!("invalid request: {e}")))
}

async fn blocking<T, F>(f: F) -> ApiResult<T>
where
    F: FnOnce() -> ApiResult<T> + Send + 'static,
    T: Send + 'static,
{
    tokio::task::spawn_blocking(f).await.unwrap_or_else(|e| {
        Err(ApiError {
            status: 500,
            error: format!("internal error: {e}"),
            position: None,
        })
    })
}

async fn combine(State(st): State<Shared>, body: Bytes) -> Response {
    let req: CombineRequest = match parse(&body) {
        Ok(r) => r,
        Err(e) => return reply::<()>(Err(e)),
    };
    let service = st.service.clone();
    reply(blocking(move || service.combine(&req)).await)
}

async fn interpret(State(st): State<Shared>, body: Bytes) -> Response {
    let req: InterpretRequest = match parse(&body) {
        Ok(r) => r,
        Err(e) => return reply::<()>(Err(e)),
    };
    let service = st.service.clone();
    reply(blocking(move || service.interpret(&req)).await)
}

async fn fragments(State(st): State<Shared>) -> Response {
    reply(Ok(st.service.fragments()))
}

async fn laws(
    State(st): State<Shared>,
    query: Result<Query<LawsQuery>, QueryRejection>,
) -> Response {
    let q = match query {
        Ok(Query(q)) => q,
        Err(e) => return reply::<()>(Err(ApiError::bad_request(e.body_text()))),
    };
    let key = to_wire(&q);
    if let Some(body) = st.laws.lock().unwrap().get(&key) {
        return json_response(200, body.to_string());
    }
    let service = st.service.clone();
    match blocking(move || service.laws(&q)).await {
        Ok(reports) => {
            let body: Arc<str> = to_wire(&reports).into();
            st.laws.lock().unwrap().insert(key, body.clone());
            json_response(200, body.to_string())
        }
        Err(e) => reply::<()>(Err(e)),
    }
}

async fn health() -> Response {
    json_response(200, r#"{"ok":true}"#.into())
}
