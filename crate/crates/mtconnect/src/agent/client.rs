use std::io;
use std::sync::Arc;
use std::time::Duration;

use chrono::Utc;
use tokio::io::{AsyncBufReadExt, AsyncWriteExt, BufReader};
use tokio::net::TcpStream;
use tokio::time::{sleep, sleep_until, Instant};

use super::Agent;
use crate::wire::Line;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClientOptions {
    pub reconnect_min: Duration,
    pub reconnect_max: Duration,
}

impl Default for ClientOptions {
    fn default() -> Self {
        Self {
            reconnect_min: Duration::from_secs(1),
            reconnect_max: Duration::from_secs(30),
        }
    }
}

/// Keeps a connection to the adapter open forever, reconnecting with
/// exponential backoff. While disconnected every observed item reads
/// `UNAVAILABLE`.
pub async fn follow_adapter(agent: Arc<Agent>, host: String, port: u16, opts: ClientOptions) {
    let mut backoff = opts.reconnect_min;
    loop {
        match TcpStream::connect((host.as_str(), port)).await {
            Ok(stream) => {
                log::info!("connected to adapter {host}:{port}");
                backoff = opts.reconnect_min;
                agent.set_connected(true);
                if let Err(e) = session(&agent, stream).await {
                    log::warn!("adapter connection lost: {e}");
                } else {
                    log::info!("adapter closed the connection");
                }
                agent.set_connected(false);
                agent.mark_unavailable(Utc::now());
            }
            Err(e) => log::debug!("adapter {host}:{port} unreachable: {e}"),
        }
        sleep(backoff).await;
        backoff = (backoff * 2).min(opts.reconnect_max);
    }
}

/// Reads lines until EOF. Once the adapter answers a ping with its
/// heartbeat period, pings follow at that period and silence for two
/// periods counts as a dead connection.
async fn session(agent: &Agent, stream: TcpStream) -> io::Result<()> {
    let (read, mut write) = stream.into_split();
    let mut lines = BufReader::new(read).lines();
    write.write_all(b"* PING\n").await?;
    let mut heartbeat: Option<Duration> = None;
    let mut last_rx = Instant::now();
    let mut next_ping = Instant::now();
    loop {
        let deadline = heartbeat.map(|h| last_rx + 2 * h);
        tokio::select! {
            line = lines.next_line() => {
                let Some(line) = line? else { return Ok(()) };
                last_rx = Instant::now();
                if let Ok(Line::Heartbeat(text)) = agent.ingest_line(&line) {
                    let period = text.strip_prefix("PONG").and_then(|ms| ms.trim().parse::<u64>().ok());
                    if let Some(ms) = period.filter(|&ms| ms > 0) {
                        if heartbeat.is_none() {
                            next_ping = Instant::now() + Duration::from_millis(ms);
                        }
                        heartbeat = Some(Duration::from_millis(ms));
                    }
                }
            }
            _ = sleep_until(next_ping), if heartbeat.is_some() => {
                write.write_all(b"* PING\n").await?;
                next_ping += heartbeat.expect("guarded by the branch condition");
            }
            _ = sleep_until(deadline.unwrap_or(last_rx)), if deadline.is_some() => {
                return Err(io::Error::new(io::ErrorKind::TimedOut, "no data or heartbeat from the adapter"));
            }
        }
    }
}
