//! One function per subcommand. Each returns once its component stops.

use std::io::{BufRead, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use panel_imaging::io::write_png;
use panel_mock::{render_sequence, GroundTruth};
use panel_mtconnect::{follow_adapter, Adapter, AdapterOptions, Agent, ClientOptions, DeviceModel};
use panel_station::source::parse_mock_document;
use panel_station::{
    calibrate_mock, load_station_config, open_source, run_station, CalibrationOptions, FrameSourceConfig,
    ReadingRecord, RunOptions, RunSummary, Station, StationConfig, StationHandle,
};
use tokio::net::TcpListener;

use crate::control::{self, ControlState};
use crate::error::CliError;

fn read_file(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_config(path: &Path) -> Result<StationConfig, CliError> {
    load_station_config(&read_file(path)?).map_err(|errors| CliError::Config {
        path: path.to_path_buf(),
        errors,
    })
}

fn runtime() -> Result<tokio::runtime::Runtime, CliError> {
    tokio::runtime::Runtime::new().map_err(|e| CliError::Runtime(format!("cannot start async runtime: {e}")))
}

async fn bind(port: u16, what: &str) -> Result<TcpListener, CliError> {
    TcpListener::bind(SocketAddr::from(([0, 0, 0, 0], port)))
        .await
        .map_err(|e| CliError::Runtime(format!("cannot listen for {what} on port {port}: {e}")))
}

pub fn validate(path: &Path) -> Result<String, CliError> {
    let cfg = load_config(path)?;
    Ok(format!("OK: 1 station, {} artifacts", cfg.artifacts.len()))
}

/// Writes `frame_NNNNN.png` per frame and every frame's ground truth to
/// `truth.json`; returns the frame count.
pub fn render_mock(spec: &Path, out: &Path, fps: u32) -> Result<usize, CliError> {
    let seq = parse_mock_document(&read_file(spec)?, fps).map_err(|m| CliError::Usage(format!("{}: {m}", spec.display())))?;
    std::fs::create_dir_all(out).map_err(|source| CliError::Read {
        path: out.to_path_buf(),
        source,
    })?;
    let mut truths: Vec<GroundTruth> = Vec::new();
    for frame in render_sequence(&seq).map_err(|e| CliError::Usage(e.to_string()))? {
        let frame = frame.map_err(|e| CliError::Runtime(e.to_string()))?;
        let path = out.join(format!("frame_{:05}.png", frame.index));
        write_png(&frame.image, &path).map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?;
        truths.push(frame.truth);
    }
    let text = serde_json::to_string_pretty(&truths).expect("ground truth always serializes");
    std::fs::write(out.join("truth.json"), text).map_err(|e| CliError::Runtime(e.to_string()))?;
    Ok(truths.len())
}

/// The path a config at `config` should use to reach `target`: the bare
/// file name when both share a directory, otherwise absolute.
fn relative_to_config(target: &Path, config: &Path) -> PathBuf {
    let dir_of = |p: &Path| {
        p.parent()
            .filter(|d| !d.as_os_str().is_empty())
            .unwrap_or(Path::new("."))
            .canonicalize()
            .ok()
    };
    match (dir_of(target), dir_of(config), target.file_name()) {
        (Some(a), Some(b), Some(name)) if a == b => PathBuf::from(name),
        _ => target.canonicalize().unwrap_or_else(|_| target.to_path_buf()),
    }
}

/// Calibrates every artifact of a mock panel and writes the station config.
pub fn calibrate_mock_config(
    spec: &Path,
    out: &Path,
    station_id: &str,
    fps: u32,
    repeat: bool,
) -> Result<usize, CliError> {
    let seq = parse_mock_document(&read_file(spec)?, fps).map_err(|m| CliError::Usage(format!("{}: {m}", spec.display())))?;
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Runtime(e.to_string()))?;
    }
    let source = FrameSourceConfig::Mock {
        path: relative_to_config(spec, out),
        fps: seq.fps,
        repeat,
    };
    let cfg = calibrate_mock(&seq.base, &CalibrationOptions::new(station_id, source))?;
    std::fs::write(out, cfg.to_json_pretty()).map_err(|e| CliError::Runtime(format!("{}: {e}", out.display())))?;
    Ok(cfg.artifacts.len())
}

#[derive(Debug, Clone)]
pub struct ServeOptions {
    pub adapter_port: Option<u16>,
    pub heartbeat_ms: u64,
    /// Control API port and the directory of static UI assets, if any.
    pub control: Option<(u16, Option<PathBuf>)>,
    /// Echo every reading to stdout as a JSON line.
    pub json: bool,
    /// Release frames at the source's nominal rate.
    pub paced: bool,
}

/// Runs the pipeline on the config's source, feeding the adapter and
/// optionally serving the control API, until the source ends or Ctrl-C.
pub fn serve_station(config_path: &Path, opts: &ServeOptions) -> Result<RunSummary, CliError> {
    let cfg = load_config(config_path)?;
    let base_dir = config_path.parent().unwrap_or(Path::new("."));
    let source = open_source(&cfg.frame_source, base_dir).map_err(panel_station::StationError::from)?;
    let pace = opts.paced.then(|| cfg.frame_source.fps());
    let handle = StationHandle::new(Station::new(cfg).map_err(panel_station::StationError::from)?);
    let rt = runtime()?;
    let adapter = Adapter::new(AdapterOptions {
        heartbeat_ms: opts.heartbeat_ms,
        ..AdapterOptions::default()
    });
    rt.block_on(async {
        if let Some(port) = opts.adapter_port {
            let listener = bind(port, "adapter clients").await?;
            log::info!("adapter listening on {}", listener.local_addr().map_err(|e| CliError::Runtime(e.to_string()))?);
            tokio::spawn(adapter.clone().serve(listener));
        }
        if let Some((port, ui_dir)) = &opts.control {
            let state = ControlState::new(handle.clone(), Some(config_path.to_path_buf()));
            let mut app = control::router(state);
            if let Some(dir) = ui_dir {
                app = app.fallback_service(tower_http::services::ServeDir::new(dir));
            }
            let listener = bind(*port, "the control API").await?;
            log::info!("control API on http://{}", listener.local_addr().map_err(|e| CliError::Runtime(e.to_string()))?);
            tokio::spawn(async move { axum::serve(listener, app).await });
        }
        let h = handle.clone();
        tokio::spawn(async move {
            if tokio::signal::ctrl_c().await.is_ok() {
                log::info!("stopping");
                h.request_stop();
            }
        });
        Ok::<_, CliError>(())
    })?;

    let json = opts.json;
    let worker = {
        let handle = handle.clone();
        let adapter = adapter.clone();
        rt.spawn_blocking(move || {
            let stdout = std::io::stdout();
            run_station(&handle, source, RunOptions { pace_fps: pace }, |station, readings| {
                adapter.publish_readings(readings);
                if json {
                    let id = &station.config().station_id;
                    let mut out = stdout.lock();
                    for r in readings {
                        let _ = writeln!(out, "{}", ReadingRecord::new(id, r).to_json());
                    }
                }
            })
        })
    };
    let summary = rt
        .block_on(worker)
        .map_err(|e| CliError::Runtime(e.to_string()))??;
    rt.shutdown_background();
    Ok(summary)
}

/// Publishes JSON reading lines from `input` (one `ReadingRecord` per line)
/// to adapter clients on `port` until the input ends.
pub fn adapter(port: u16, heartbeat_ms: u64, input: impl BufRead + Send + 'static) -> Result<u64, CliError> {
    let rt = runtime()?;
    let adapter = Adapter::new(AdapterOptions {
        heartbeat_ms,
        ..AdapterOptions::default()
    });
    rt.block_on(async {
        let listener = bind(port, "adapter clients").await?;
        tokio::spawn(adapter.clone().serve(listener));
        let a = adapter.clone();
        let feeder = tokio::task::spawn_blocking(move || {
            for (n, line) in input.lines().enumerate() {
                let line = line.map_err(|e| CliError::Runtime(format!("input: {e}")))?;
                if line.trim().is_empty() {
                    continue;
                }
                match ReadingRecord::from_json(&line) {
                    Ok(rec) => a.publish_readings(&[rec.into_reading()]),
                    Err(e) => log::warn!("input line {}: {e}", n + 1),
                }
            }
            Ok::<_, CliError>(())
        });
        tokio::select! {
            r = feeder => r.map_err(|e| CliError::Runtime(e.to_string()))?,
            _ = tokio::signal::ctrl_c() => Ok(()),
        }
    })?;
    Ok(adapter.published())
}

#[derive(Debug, Clone)]
pub struct AgentOptions {
    pub adapter_host: String,
    pub adapter_port: u16,
    pub http_port: u16,
    pub buffer_size: usize,
}

/// Follows the adapter and serves the agent's HTTP interface until Ctrl-C.
pub fn agent(config_path: &Path, opts: &AgentOptions) -> Result<(), CliError> {
    let cfg = load_config(config_path)?;
    if opts.buffer_size == 0 {
        return Err(CliError::Usage("--buffer-size must be at least 1".into()));
    }
    let agent = Agent::new(DeviceModel::from_station(&cfg), opts.buffer_size);
    let rt = runtime()?;
    rt.block_on(async {
        let listener = bind(opts.http_port, "agent requests").await?;
        log::info!("agent on http://{}", listener.local_addr().map_err(|e| CliError::Runtime(e.to_string()))?);
        let client = tokio::spawn(follow_adapter(
            agent.clone(),
            opts.adapter_host.clone(),
            opts.adapter_port,
            ClientOptions::default(),
        ));
        let served = tokio::select! {
            r = axum::serve(listener, agent.router()) => r.map_err(|e| CliError::Runtime(e.to_string())),
            _ = tokio::signal::ctrl_c() => Ok(()),
        };
        client.abort();
        served
    })?;
    rt.shutdown_background();
    Ok(())
}
