use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use panel_mtconnect::{DEFAULT_ADAPTER_PORT, DEFAULT_AGENT_PORT, DEFAULT_BUFFER_SIZE, DEFAULT_HEARTBEAT_MS};

use crate::commands::{self, AgentOptions, ServeOptions};
use crate::control::DEFAULT_CONTROL_PORT;
use crate::error::CliError;

const CONFIG_ENV: &str = "PANEL_SIGHT_CONFIG";

#[derive(Debug, Parser)]
#[command(name = "panel-sight", version, about = "Reads analog control panels from camera frames and streams the readings over MTConnect")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the station pipeline and publish readings through the adapter.
    Run {
        #[arg(env = CONFIG_ENV)]
        config: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ADAPTER_PORT)]
        adapter_port: u16,
        /// Process frames without starting the adapter.
        #[arg(long)]
        no_adapter: bool,
        /// Print every reading to stdout as a JSON line.
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = DEFAULT_HEARTBEAT_MS)]
        heartbeat_ms: u64,
        /// Process frames as fast as possible instead of at the source rate.
        #[arg(long)]
        no_pace: bool,
    },
    /// Check a station config and report every problem.
    Validate {
        #[arg(env = CONFIG_ENV)]
        config: PathBuf,
    },
    /// Render a mock panel or sequence document to PNG frames plus truth.json.
    RenderMock {
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Frame rate for single-panel documents.
        #[arg(long, default_value_t = 30)]
        fps: u32,
    },
    /// Write a station config calibrated against a mock panel document.
    CalibrateMock {
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "station-1")]
        station_id: String,
        #[arg(long, default_value_t = 30)]
        fps: u32,
        /// Loop the mock source when the station runs.
        #[arg(long)]
        repeat: bool,
    },
    /// Serve JSON reading lines from stdin to adapter clients.
    Adapter {
        #[arg(long, default_value_t = DEFAULT_ADAPTER_PORT)]
        port: u16,
        #[arg(long, default_value_t = DEFAULT_HEARTBEAT_MS)]
        heartbeat_ms: u64,
    },
    /// Follow an adapter and serve /probe, /current and /sample.
    Agent {
        /// Station config declaring the device's data items.
        #[arg(long, env = CONFIG_ENV)]
        config: PathBuf,
        #[arg(long, default_value = "127.0.0.1")]
        adapter_host: String,
        #[arg(long, default_value_t = DEFAULT_ADAPTER_PORT)]
        adapter_port: u16,
        #[arg(long, default_value_t = DEFAULT_AGENT_PORT)]
        http_port: u16,
        #[arg(long, default_value_t = DEFAULT_BUFFER_SIZE)]
        buffer_size: usize,
    },
    /// Run the pipeline with the control API and calibration UI attached.
    Calibrate {
        #[arg(long, env = CONFIG_ENV)]
        config: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CONTROL_PORT)]
        http_port: u16,
        /// Built UI assets served at `/`.
        #[arg(long)]
        ui_dir: Option<PathBuf>,
        /// Also publish readings through an adapter on this port.
        #[arg(long)]
        adapter_port: Option<u16>,
        #[arg(long)]
        no_pace: bool,
    },
}

fn dispatch(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Run {
            config,
            adapter_port,
            no_adapter,
            json,
            heartbeat_ms,
            no_pace,
        } => {
            let opts = ServeOptions {
                adapter_port: (!no_adapter).then_some(adapter_port),
                heartbeat_ms,
                control: None,
                json,
                paced: !no_pace,
            };
            let summary = commands::serve_station(&config, &opts)?;
            eprintln!("{}", serde_json::to_string(&summary).expect("summaries always serialize"));
        }
        Command::Validate { config } => println!("{}", commands::validate(&config)?),
        Command::RenderMock { spec, out, fps } => {
            let n = commands::render_mock(&spec, &out, fps)?;
            println!("rendered {n} frames to {}", out.display());
        }
        Command::CalibrateMock {
            spec,
            out,
            station_id,
            fps,
            repeat,
        } => {
            let n = commands::calibrate_mock_config(&spec, &out, &station_id, fps, repeat)?;
            println!("calibrated {n} artifacts into {}", out.display());
        }
        Command::Adapter { port, heartbeat_ms } => {
            let n = commands::adapter(port, heartbeat_ms, std::io::BufReader::new(std::io::stdin()))?;
            eprintln!("published {n} lines");
        }
        Command::Agent {
            config,
            adapter_host,
            adapter_port,
            http_port,
            buffer_size,
        } => commands::agent(
            &config,
            &AgentOptions {
                adapter_host,
                adapter_port,
                http_port,
                buffer_size,
            },
        )?,
        Command::Calibrate {
            config,
            http_port,
            ui_dir,
            adapter_port,
            no_pace,
        } => {
            let opts = ServeOptions {
                adapter_port,
                heartbeat_ms: DEFAULT_HEARTBEAT_MS,
                control: Some((http_port, ui_dir)),
                json: false,
                paced: !no_pace,
            };
            let summary = commands::serve_station(&config, &opts)?;
            eprintln!("{}", serde_json::to_string(&summary).expect("summaries always serialize"));
        }
    }
    Ok(())
}

/// Parses `args`, runs the command and maps the outcome to an exit code.
pub fn main_with(args: impl IntoIterator<Item = std::ffi::OsString>) -> ExitCode {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
