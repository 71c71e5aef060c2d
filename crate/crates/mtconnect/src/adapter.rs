//! TCP side of the adapter: broadcasts data lines to every connected agent.

use std::collections::BTreeMap;
use std::io;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use chrono::{DateTime, Utc};
use panel_readers::Reading;
use parking_lot::Mutex;
use tokio::io::{AsyncBufReadExt, AsyncWriteExt, BufReader};
use tokio::net::{TcpListener, TcpStream};
use tokio::sync::mpsc::{self, error::TrySendError};
use tokio::task::JoinSet;

use crate::error::WireError;
use crate::wire::{format_data_line, readings_to_data_lines, DataLine};

pub const DEFAULT_ADAPTER_PORT: u16 = 7878;
pub const DEFAULT_HEARTBEAT_MS: u64 = 10_000;
/// Lines a connection may fall behind before it is dropped.
pub const DEFAULT_BACKLOG: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdapterOptions {
    /// Advertised in `* PONG <ms>` replies.
    pub heartbeat_ms: u64,
    pub backlog: usize,
}

impl Default for AdapterOptions {
    fn default() -> Self {
        Self {
            heartbeat_ms: DEFAULT_HEARTBEAT_MS,
            backlog: DEFAULT_BACKLOG,
        }
    }
}

type Wire = Arc<str>;

#[derive(Default)]
struct Shared {
    /// Latest value and timestamp of every item published so far.
    latest: BTreeMap<String, (DateTime<Utc>, String)>,
    clients: Vec<mpsc::Sender<Wire>>,
}

pub struct Adapter {
    opts: AdapterOptions,
    shared: Mutex<Shared>,
    published: AtomicU64,
    slow_disconnects: AtomicU64,
}

impl Adapter {
    pub fn new(opts: AdapterOptions) -> Arc<Self> {
        Arc::new(Self {
            opts,
            shared: Mutex::new(Shared::default()),
            published: AtomicU64::new(0),
            slow_disconnects: AtomicU64::new(0),
        })
    }

    pub fn options(&self) -> AdapterOptions {
        self.opts
    }

    /// Sends one line to every connection. Never blocks: a connection whose
    /// backlog is full is dropped instead.
    pub fn publish(&self, line: &DataLine) -> Result<(), WireError> {
        let wire: Wire = format_data_line(line)?.into();
        let mut s = self.shared.lock();
        for (id, value) in &line.items {
            s.latest.insert(id.clone(), (line.timestamp, value.clone()));
        }
        s.clients.retain(|tx| match tx.try_send(wire.clone()) {
            Ok(()) => true,
            Err(TrySendError::Full(_)) => {
                log::warn!("dropping an agent connection more than {} lines behind", self.opts.backlog);
                self.slow_disconnects.fetch_add(1, Ordering::Relaxed);
                false
            }
            Err(TrySendError::Closed(_)) => false,
        });
        self.published.fetch_add(1, Ordering::Relaxed);
        Ok(())
    }

    /// Publishes a tick's readings, one line per distinct timestamp.
    pub fn publish_readings(&self, readings: &[Reading]) {
        for line in readings_to_data_lines(readings) {
            self.publish(&line).expect("lines built from readings are never empty");
        }
    }

    /// Lines published since start.
    pub fn published(&self) -> u64 {
        self.published.load(Ordering::Relaxed)
    }

    pub fn slow_disconnects(&self) -> u64 {
        self.slow_disconnects.load(Ordering::Relaxed)
    }

    pub fn connection_count(&self) -> usize {
        let mut s = self.shared.lock();
        s.clients.retain(|tx| !tx.is_closed());
        s.clients.len()
    }

    /// The current state as lines, grouped by timestamp in ascending order.
    pub fn snapshot(&self) -> Vec<DataLine> {
        snapshot_lines(&self.shared.lock())
    }

    /// Registers a connection: queues the snapshot, then every later line.
    /// Both happen under one lock so no line is missed or repeated.
    fn register(&self) -> (mpsc::Receiver<Wire>, mpsc::WeakSender<Wire>) {
        let mut s = self.shared.lock();
        let snapshot = snapshot_lines(&s);
        let (tx, rx) = mpsc::channel(self.opts.backlog.max(1) + snapshot.len());
        for line in &snapshot {
            let wire = format_data_line(line).expect("snapshot lines are never empty");
            tx.try_send(wire.into()).expect("capacity covers the snapshot");
        }
        let weak = tx.downgrade();
        s.clients.push(tx);
        (rx, weak)
    }

    /// Accepts connections until the task is dropped; dropping it closes
    /// every connection.
    pub async fn serve(self: Arc<Self>, listener: TcpListener) -> io::Result<()> {
        let mut connections = JoinSet::new();
        loop {
            tokio::select! {
                accepted = listener.accept() => {
                    let (stream, peer) = accepted?;
                    log::info!("agent connected from {peer}");
                    let adapter = self.clone();
                    connections.spawn(async move {
                        if let Err(e) = adapter.connection(stream).await {
                            log::debug!("connection {peer} closed: {e}");
                        }
                    });
                }
                Some(_) = connections.join_next() => {}
            }
        }
    }

    async fn connection(&self, stream: TcpStream) -> io::Result<()> {
        stream.set_nodelay(true)?;
        let (read, mut write) = stream.into_split();
        // The reader only holds a weak sender, so dropping the connection
        // from the broadcast list ends the writer and with it the connection.
        let (mut rx, pong_tx) = self.register();
        let pong: Wire = format!("* PONG {}\n", self.opts.heartbeat_ms).into();
        let writer = async {
            while let Some(line) = rx.recv().await {
                write.write_all(line.as_bytes()).await?;
            }
            io::Result::Ok(())
        };
        let reader = async {
            let mut lines = BufReader::new(read).lines();
            while let Some(line) = lines.next_line().await? {
                if line.trim() == "* PING" {
                    match pong_tx.upgrade() {
                        Some(tx) if tx.try_send(pong.clone()).is_ok() => {}
                        _ => break,
                    }
                }
            }
            io::Result::Ok(())
        };
        tokio::select! {
            r = writer => r,
            r = reader => r,
        }
    }
}

fn snapshot_lines(s: &Shared) -> Vec<DataLine> {
    let mut by_time: BTreeMap<DateTime<Utc>, Vec<(String, String)>> = BTreeMap::new();
    for (id, (ts, value)) in &s.latest {
        by_time.entry(*ts).or_default().push((id.clone(), value.clone()));
    }
    by_time
        .into_iter()
        .map(|(ts, items)| DataLine::new(ts, items))
        .collect()
}
