//! Local HTTP/JSON service holding interactive mutation sessions.
//!
//! Sessions live in memory, capped with least-recently-used eviction. The
//! session table lock is held only for lookups; each session has its own
//! lock, so requests on one session are serialized without blocking others.

use std::num::NonZeroUsize;
use std::sync::{Arc, Mutex};

use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use lru::LruCache;
use satmod::seed::FramedMatrix;
use satmod::{catalog, ExchangeMatrix, MutationWord, Permutation, Token, WordAction};
use serde::Deserialize;
use serde_json::{json, Value};

pub const DEFAULT_SESSION_CAP: usize = 256;

pub struct Session {
    base: ExchangeMatrix,
    /// Applied tokens in application order.
    history: Vec<Token>,
    current: FramedMatrix,
}

impl Session {
    fn new(base: ExchangeMatrix) -> Self {
        Session {
            current: FramedMatrix::new(base.clone()),
            base,
            history: Vec::new(),
        }
    }

    /// The applied tokens as a word in composition order.
    fn word(&self) -> MutationWord {
        MutationWord::from_tokens(self.base.n(), self.history.iter().rev().cloned().collect())
            .expect("history tokens were validated")
    }

    fn state(&self) -> Value {
        let m = &self.current.matrix;
        let is_loop = m == &self.base;
        json!({
            "matrix": m.rows(),
            "weights": m.weights(),
            "frozen": m.frozen(),
            "word": self.word().to_string(),
            "history_length": self.history.len(),
            "is_loop": is_loop,
            "loop_trivial": if is_loop { Some(self.current.c_is_identity()) } else { None },
            "c_matrix": self.current.c,
        })
    }
}

type Shared<T> = Arc<Mutex<T>>;

#[derive(Clone)]
pub struct AppState {
    sessions: Shared<LruCache<String, Shared<Session>>>,
}

impl AppState {
    pub fn new(cap: usize) -> Self {
        let cap = NonZeroUsize::new(cap.max(1)).expect("cap is positive");
        AppState {
            sessions: Arc::new(Mutex::new(LruCache::new(cap))),
        }
    }

    fn session(&self, id: &str) -> Result<Shared<Session>, ApiError> {
        self.sessions
            .lock()
            .expect("session table lock")
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError(StatusCode::NOT_FOUND, format!("unknown session '{id}'")))
    }
}

impl Default for AppState {
    fn default() -> Self {
        Self::new(DEFAULT_SESSION_CAP)
    }
}

pub struct ApiError(StatusCode, String);

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(json!({"error": self.1}))).into_response()
    }
}

fn unprocessable(e: impl ToString) -> ApiError {
    ApiError(StatusCode::UNPROCESSABLE_ENTITY, e.to_string())
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreateSession {
    pub catalog: Option<String>,
    pub quiver: Option<Value>,
}

/// A permutation as its list of images or in cycle notation.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum PermSpec {
    Images(Vec<usize>),
    Cycles(String),
}

impl PermSpec {
    fn resolve(&self, n: usize) -> Result<Permutation, ApiError> {
        match self {
            PermSpec::Images(v) if v.len() == n => Permutation::from_images(v.clone()).map_err(unprocessable),
            PermSpec::Images(v) => Err(unprocessable(format!("expected {n} images, got {}", v.len()))),
            PermSpec::Cycles(s) => {
                let w = MutationWord::parse(n, s).map_err(unprocessable)?;
                if w.mutation_count() > 0 {
                    return Err(unprocessable("perm must not contain mutations"));
                }
                Ok(w.normal_parts().0)
            }
        }
    }
}

/// Mutates at `k` (if given), then relabels by `perm` (if given).
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MutateRequest {
    pub k: Option<usize>,
    pub perm: Option<PermSpec>,
}

async fn create(State(app): State<AppState>, Json(req): Json<CreateSession>) -> Result<impl IntoResponse, ApiError> {
    let base = match (&req.catalog, &req.quiver) {
        (Some(name), None) => catalog::get(name)
            .ok_or_else(|| ApiError(StatusCode::NOT_FOUND, format!("unknown catalog quiver '{name}'")))?,
        (None, Some(q)) => ExchangeMatrix::from_json_value(q.clone()).map_err(unprocessable)?,
        _ => return Err(unprocessable("give exactly one of 'catalog' and 'quiver'")),
    };
    let session = Session::new(base);
    let state = session.state();
    let id = uuid::Uuid::new_v4().simple().to_string();
    app.sessions
        .lock()
        .expect("session table lock")
        .put(id.clone(), Arc::new(Mutex::new(session)));
    Ok((StatusCode::CREATED, Json(json!({"id": id, "state": state}))))
}

async fn show(State(app): State<AppState>, Path(id): Path<String>) -> Result<Json<Value>, ApiError> {
    let s = app.session(&id)?;
    let state = s.lock().expect("session lock").state();
    Ok(Json(state))
}

async fn mutate(
    State(app): State<AppState>,
    Path(id): Path<String>,
    Json(req): Json<MutateRequest>,
) -> Result<Json<Value>, ApiError> {
    let s = app.session(&id)?;
    let mut s = s.lock().expect("session lock");
    let n = s.base.n();
    let mut tokens = Vec::new();
    if let Some(k) = req.k {
        tokens.push(Token::Mutate(k));
    }
    if let Some(p) = &req.perm {
        tokens.push(Token::Perm(p.resolve(n)?));
    }
    if tokens.is_empty() {
        return Err(unprocessable("give 'k', 'perm' or both"));
    }
    // all-or-nothing: apply to a copy first
    let mut next = s.current.clone();
    for t in &tokens {
        next = next.apply_token(t).map_err(unprocessable)?;
    }
    s.current = next;
    s.history.extend(tokens);
    Ok(Json(s.state()))
}

async fn undo(State(app): State<AppState>, Path(id): Path<String>) -> Result<Json<Value>, ApiError> {
    let s = app.session(&id)?;
    let mut s = s.lock().expect("session lock");
    if s.history.pop().is_none() {
        return Err(ApiError(StatusCode::CONFLICT, "history is empty".into()));
    }
    let replayed = FramedMatrix::new(s.base.clone()).apply_word(&s.word()).map_err(unprocessable)?;
    s.current = replayed;
    Ok(Json(s.state()))
}

async fn list_catalog() -> Json<Value> {
    let entries: Vec<Value> = catalog::names()
        .into_iter()
        .map(|name| json!({"name": name, "quiver": catalog::get(name).expect("bundled").to_json()}))
        .collect();
    Json(Value::Array(entries))
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/catalog", get(list_catalog))
        .route("/sessions", post(create))
        .route("/sessions/{id}", get(show))
        .route("/sessions/{id}/mutate", post(mutate))
        .route("/sessions/{id}/undo", post(undo))
        .with_state(state)
}

/// Serves on `127.0.0.1:port` until the process ends.
pub async fn serve(port: u16) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(("127.0.0.1", port)).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(AppState::default())).await
}
