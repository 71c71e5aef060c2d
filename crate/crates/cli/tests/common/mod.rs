#![allow(dead_code)]

use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use panel_mock::scenes::gauge_and_light_panel;
use panel_mock::{PanelSpec, StateValue};
use panel_sight::control::{self, ControlState};
use panel_station::{calibrate_mock, CalibrationOptions, FrameSourceConfig, Station, StationConfig, StationHandle};

pub fn gauge_panel_at(value: f64) -> PanelSpec {
    gauge_and_light_panel()
        .with_state("gauge", StateValue::Number(value))
        .unwrap()
}

/// Calibrated config for the gauge-and-light panel, sourced from `panel.json`.
pub fn gauge_and_light_config() -> StationConfig {
    let source = FrameSourceConfig::Mock {
        path: PathBuf::from("panel.json"),
        fps: 30,
        repeat: false,
    };
    calibrate_mock(&gauge_and_light_panel(), &CalibrationOptions::new("s1", source)).unwrap()
}

/// Writes `panel.json` and `station.json` into `dir`; returns the config path.
pub fn write_station(dir: &Path, cfg: &StationConfig) -> PathBuf {
    std::fs::write(dir.join("panel.json"), serde_json::to_vec(&gauge_and_light_panel()).unwrap()).unwrap();
    let path = dir.join("station.json");
    std::fs::write(&path, cfg.to_json_pretty()).unwrap();
    path
}

pub struct ControlServer {
    pub addr: SocketAddr,
    pub handle: Arc<StationHandle>,
    pub state: Arc<ControlState>,
    pub config_path: PathBuf,
    pub _dir: tempfile::TempDir,
}

pub async fn serve_control(cfg: StationConfig) -> ControlServer {
    let dir = tempfile::tempdir().unwrap();
    let config_path = write_station(dir.path(), &cfg);
    let handle = StationHandle::new(Station::new(cfg).unwrap());
    let state = ControlState::new(handle.clone(), Some(config_path.clone()));
    let app = control::router(state.clone());
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    tokio::spawn(async move { axum::serve(listener, app).await.unwrap() });
    ControlServer {
        addr,
        handle,
        state,
        config_path,
        _dir: dir,
    }
}

pub struct HttpResponse {
    pub status: u16,
    pub content_type: String,
    pub body: Vec<u8>,
}

impl HttpResponse {
    pub fn text(&self) -> String {
        String::from_utf8(self.body.clone()).unwrap()
    }

    pub fn json(&self) -> serde_json::Value {
        serde_json::from_slice(&self.body).unwrap()
    }
}

async fn finish(resp: reqwest::Response) -> HttpResponse {
    HttpResponse {
        status: resp.status().as_u16(),
        content_type: resp
            .headers()
            .get("content-type")
            .map(|v| v.to_str().unwrap().to_string())
            .unwrap_or_default(),
        body: resp.bytes().await.unwrap().to_vec(),
    }
}

pub async fn get(addr: SocketAddr, path: &str) -> HttpResponse {
    finish(reqwest::get(format!("http://{addr}{path}")).await.unwrap()).await
}

pub async fn send(addr: SocketAddr, method: reqwest::Method, path: &str, body: impl Into<reqwest::Body>) -> HttpResponse {
    let resp = reqwest::Client::new()
        .request(method, format!("http://{addr}{path}"))
        .header("content-type", "application/json")
        .body(body)
        .send()
        .await
        .unwrap();
    finish(resp).await
}
