//! HTTP control API for live calibration of a running station.

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use panel_station::{load_station_config, ConfigError, Station, StationConfig, StationHandle, StatsSnapshot};
use parking_lot::Mutex;
use serde::{Deserialize, Serialize};

use crate::preview::{preview, render_mock_frame, FrameRef, PreviewError, PreviewRequest};

pub const DEFAULT_CONTROL_PORT: u16 = 8080;

pub struct ControlState {
    handle: Arc<StationHandle>,
    /// Where accepted configs are persisted; `None` keeps them in memory only.
    config_path: Option<PathBuf>,
    /// The document GET returns; replaced only after a PUT fully succeeds.
    document: Mutex<String>,
    /// Serializes PUTs so persist-then-swap is atomic as a whole.
    put_lock: tokio::sync::Mutex<()>,
    preview_requests: AtomicU64,
}

impl ControlState {
    pub fn new(handle: Arc<StationHandle>, config_path: Option<PathBuf>) -> Arc<Self> {
        let document = handle.station().config().to_json_pretty();
        Arc::new(Self {
            handle,
            config_path,
            document: Mutex::new(document),
            put_lock: tokio::sync::Mutex::new(()),
            preview_requests: AtomicU64::new(0),
        })
    }

    pub fn preview_requests(&self) -> u64 {
        self.preview_requests.load(Ordering::Relaxed)
    }
}

#[derive(Debug, Serialize)]
pub struct ControlStats {
    #[serde(flatten)]
    pub station: StatsSnapshot,
    pub preview_requests: u64,
}

#[derive(Serialize)]
struct Problems {
    errors: Vec<ConfigError>,
}

fn problems(status: StatusCode, errors: Vec<ConfigError>) -> Response {
    (status, Json(Problems { errors })).into_response()
}

fn problem(status: StatusCode, path: &str, message: impl ToString) -> Response {
    problems(
        status,
        vec![ConfigError {
            path: path.to_string(),
            message: message.to_string(),
        }],
    )
}

pub fn router(state: Arc<ControlState>) -> Router {
    Router::new()
        .route("/api/frame", get(frame))
        .route("/api/preview", post(preview_handler))
        .route("/api/config", get(get_config).put(put_config))
        .route("/api/stats", get(stats))
        .with_state(state)
}

#[derive(Deserialize)]
struct FrameQuery {
    #[serde(default)]
    view: FrameView,
}

#[derive(Deserialize, Default, PartialEq)]
#[serde(rename_all = "snake_case")]
enum FrameView {
    #[default]
    Corrected,
    Raw,
}

fn png(img: &panel_imaging::ImageBuffer) -> Response {
    match panel_imaging::io::encode_png(img) {
        Ok(bytes) => ([(header::CONTENT_TYPE, "image/png")], bytes).into_response(),
        Err(e) => (StatusCode::INTERNAL_SERVER_ERROR, e.to_string()).into_response(),
    }
}

async fn frame(State(st): State<Arc<ControlState>>, Query(q): Query<FrameQuery>) -> Response {
    let Some(raw) = st.handle.latest_frame() else {
        return (StatusCode::NOT_FOUND, "no frame has been captured yet").into_response();
    };
    if q.view == FrameView::Raw {
        return png(&raw);
    }
    match st.handle.station().correct(&raw) {
        Ok(img) => png(&img),
        Err(e) => (StatusCode::CONFLICT, e.to_string()).into_response(),
    }
}

async fn preview_handler(State(st): State<Arc<ControlState>>, body: Bytes) -> Response {
    st.preview_requests.fetch_add(1, Ordering::Relaxed);
    let de = &mut serde_json::Deserializer::from_slice(&body);
    let req: PreviewRequest = match serde_path_to_error::deserialize(de) {
        Ok(r) => r,
        Err(e) => {
            let path = e.path().to_string();
            return problem(StatusCode::BAD_REQUEST, if path == "." { "" } else { &path }, e.into_inner());
        }
    };
    let base = st.handle.station().config().clone();
    let latest = st.handle.latest_frame();
    let result = tokio::task::spawn_blocking(move || {
        let frame = match &req.frame {
            FrameRef::Latest => latest.map(|f| (*f).clone()).ok_or(PreviewError::NoFrame)?,
            FrameRef::Mock { spec, states } => render_mock_frame(spec, states)?,
        };
        preview(&base, &frame, &req)
    })
    .await;
    match result {
        Ok(Ok(resp)) => Json(resp).into_response(),
        Ok(Err(PreviewError::Invalid(errs))) => problems(StatusCode::BAD_REQUEST, errs),
        Ok(Err(PreviewError::NoFrame)) => problem(StatusCode::NOT_FOUND, "frame", "no frame has been captured yet"),
        Err(e) => (StatusCode::INTERNAL_SERVER_ERROR, e.to_string()).into_response(),
    }
}

async fn get_config(State(st): State<Arc<ControlState>>) -> Response {
    let doc = st.document.lock().clone();
    ([(header::CONTENT_TYPE, "application/json")], doc).into_response()
}

/// Writes `text` beside `path` and renames it into place, so readers of the
/// file never see a partial document.
fn persist(path: &Path, text: &str) -> std::io::Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    std::io::Write::write_all(&mut tmp, text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

#[derive(Serialize)]
struct PutResult {
    config_version: u64,
}

async fn put_config(State(st): State<Arc<ControlState>>, body: Bytes) -> Response {
    let _guard = st.put_lock.lock().await;
    let cfg: StationConfig = match load_station_config(&body) {
        Ok(c) => c,
        Err(errs) => return problems(StatusCode::BAD_REQUEST, errs.0),
    };
    let current = st.handle.station();
    // The source is opened once per run; swapping it would need a restart.
    if cfg.frame_source != current.config().frame_source {
        return problem(
            StatusCode::BAD_REQUEST,
            "frame_source",
            "cannot change while running; restart with the new config instead",
        );
    }
    let station = match Station::new(cfg) {
        Ok(s) => s,
        Err(errs) => return problems(StatusCode::BAD_REQUEST, errs.0),
    };
    let text = station.config().to_json_pretty();
    if let Some(path) = st.config_path.clone() {
        let t = text.clone();
        let written = tokio::task::spawn_blocking(move || persist(&path, &t)).await;
        match written {
            Ok(Ok(())) => {}
            Ok(Err(e)) => return (StatusCode::INTERNAL_SERVER_ERROR, format!("cannot persist config: {e}")).into_response(),
            Err(e) => return (StatusCode::INTERNAL_SERVER_ERROR, e.to_string()).into_response(),
        }
    }
    let mut doc = st.document.lock();
    let config_version = st.handle.replace_config(station);
    *doc = text;
    log::info!("config version {config_version} applied");
    Json(PutResult { config_version }).into_response()
}

async fn stats(State(st): State<Arc<ControlState>>) -> Json<ControlStats> {
    Json(ControlStats {
        station: st.handle.stats(),
        preview_requests: st.preview_requests(),
    })
}
