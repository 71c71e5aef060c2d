//! The agent: follows an adapter, keeps a sequence-numbered observation
//! buffer and answers probe/current/sample requests as XML.

mod buffer;
mod client;
mod http;
mod model;
pub mod xml;

use std::collections::HashSet;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Arc;

use chrono::{DateTime, Utc};
use parking_lot::RwLock;

pub use buffer::{Observation, ObservationBuffer, SamplePage};
pub use client::{follow_adapter, ClientOptions};
pub use model::{Category, DataItemDef, DeviceModel};

use crate::error::{AgentError, WireError};
use crate::wire::{parse_data_line, DataLine, Line, UNAVAILABLE};
use xml::HeaderInfo;

pub const DEFAULT_AGENT_PORT: u16 = 5000;
pub const DEFAULT_BUFFER_SIZE: usize = 131_072;
/// `count` of a `/sample` request without one.
pub const DEFAULT_SAMPLE_COUNT: u64 = 100;

static LAST_INSTANCE_ID: AtomicU64 = AtomicU64::new(0);

/// Milliseconds since the epoch, bumped so that two agents started in the
/// same process (or millisecond) never share an id.
fn new_instance_id(now: DateTime<Utc>) -> u64 {
    let candidate = now.timestamp_millis().max(0) as u64;
    let prev = LAST_INSTANCE_ID
        .fetch_update(Ordering::SeqCst, Ordering::SeqCst, |last| Some(candidate.max(last + 1)))
        .expect("update closure always succeeds");
    candidate.max(prev + 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AppendOutcome {
    pub appended: usize,
    pub unknown: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AgentCounters {
    pub malformed_lines: u64,
    pub unknown_items: u64,
    pub heartbeats: u64,
}

pub struct Agent {
    model: DeviceModel,
    ids: HashSet<String>,
    instance_id: u64,
    creation_time: DateTime<Utc>,
    buffer: RwLock<ObservationBuffer>,
    malformed_lines: AtomicU64,
    unknown_items: AtomicU64,
    heartbeats: AtomicU64,
    connected: AtomicBool,
}

impl Agent {
    pub fn new(model: DeviceModel, buffer_size: usize) -> Arc<Self> {
        let creation_time = panel_station::truncate_to_millis(Utc::now());
        Arc::new(Self {
            ids: model.items().iter().map(|i| i.id.clone()).collect(),
            model,
            instance_id: new_instance_id(creation_time),
            creation_time,
            buffer: RwLock::new(ObservationBuffer::new(buffer_size)),
            malformed_lines: AtomicU64::new(0),
            unknown_items: AtomicU64::new(0),
            heartbeats: AtomicU64::new(0),
            connected: AtomicBool::new(false),
        })
    }

    pub fn model(&self) -> &DeviceModel {
        &self.model
    }

    pub fn instance_id(&self) -> u64 {
        self.instance_id
    }

    pub fn counters(&self) -> AgentCounters {
        AgentCounters {
            malformed_lines: self.malformed_lines.load(Ordering::Relaxed),
            unknown_items: self.unknown_items.load(Ordering::Relaxed),
            heartbeats: self.heartbeats.load(Ordering::Relaxed),
        }
    }

    pub fn is_connected(&self) -> bool {
        self.connected.load(Ordering::SeqCst)
    }

    pub(crate) fn set_connected(&self, connected: bool) {
        self.connected.store(connected, Ordering::SeqCst);
    }

    /// A consistent copy of the buffer.
    pub fn buffer_snapshot(&self) -> ObservationBuffer {
        self.buffer.read().clone()
    }

    /// Appends every known item of the line under one write lock, so readers
    /// see all of a line or none of it. Unknown ids are skipped and counted.
    pub fn append(&self, line: &DataLine) -> AppendOutcome {
        let mut out = AppendOutcome::default();
        let mut buf = self.buffer.write();
        for (id, value) in &line.items {
            if self.ids.contains(id) {
                buf.push(line.timestamp, id, value);
                out.appended += 1;
            } else {
                out.unknown += 1;
            }
        }
        drop(buf);
        if out.unknown > 0 {
            self.unknown_items.fetch_add(out.unknown as u64, Ordering::Relaxed);
        }
        out
    }

    /// Routes one adapter line: data to the buffer, heartbeats back to the
    /// caller. Malformed lines are counted and leave the buffer unchanged.
    pub fn ingest_line(&self, raw: &str) -> Result<Line, WireError> {
        match parse_data_line(raw) {
            Ok(Line::Data(l)) => {
                self.append(&l);
                Ok(Line::Data(l))
            }
            Ok(hb @ Line::Heartbeat(_)) => {
                self.heartbeats.fetch_add(1, Ordering::Relaxed);
                Ok(hb)
            }
            Err(e) => {
                log::debug!("dropping malformed line {raw:?}: {e}");
                self.malformed_lines.fetch_add(1, Ordering::Relaxed);
                Err(e)
            }
        }
    }

    /// Records every item not already unavailable as `UNAVAILABLE` at `ts`.
    pub fn mark_unavailable(&self, ts: DateTime<Utc>) {
        let mut buf = self.buffer.write();
        let latest = buf.current(None).expect("unbounded current never fails");
        for item in self.model.items() {
            if latest.get(&item.id).is_some_and(|o| o.value != UNAVAILABLE) {
                buf.push(ts, &item.id, UNAVAILABLE);
            }
        }
    }

    fn header(&self, buf: &ObservationBuffer) -> HeaderInfo {
        HeaderInfo {
            creation_time: self.creation_time,
            instance_id: self.instance_id,
            buffer_size: buf.capacity(),
            first_sequence: buf.first_sequence(),
            last_sequence: buf.last_sequence(),
            next_sequence: buf.next_sequence(),
        }
    }

    pub fn probe_xml(&self) -> String {
        let buf = self.buffer.read();
        xml::probe(&self.model, &self.header(&buf))
    }

    /// Latest value of every model item (as of `at` when given).
    pub fn current_xml(&self, at: Option<u64>) -> Result<String, AgentError> {
        let buf = self.buffer.read();
        let latest = buf.current(at)?;
        let rows: Vec<_> = self
            .model
            .items()
            .iter()
            .map(|d| (d, latest.get(&d.id)))
            .collect();
        Ok(xml::streams(&self.model, &self.header(&buf), &rows))
    }

    /// `from` defaults to the first retained sequence.
    pub fn sample_xml(&self, from: Option<u64>, count: u64) -> Result<String, AgentError> {
        let buf = self.buffer.read();
        let page = buf.sample(from.unwrap_or_else(|| buf.first_sequence()), count)?;
        let mut header = self.header(&buf);
        header.next_sequence = page.next_sequence;
        let rows: Vec<_> = page
            .observations
            .iter()
            .filter_map(|o| self.model.item(&o.data_item_id).map(|d| (d, Some(o))))
            .collect();
        Ok(xml::streams(&self.model, &header, &rows))
    }

    pub fn error_xml(&self, e: &AgentError) -> String {
        let buf = self.buffer.read();
        xml::error(e, &self.header(&buf))
    }

    pub fn router(self: &Arc<Self>) -> axum::Router {
        http::router(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn agent() -> Arc<Agent> {
        let model = DeviceModel::new(
            "s1",
            vec![
                DataItemDef::for_kind("g1", panel_readers::ReadingKind::CircularGauge, "psi"),
                DataItemDef::for_kind("light", panel_readers::ReadingKind::SafetyLight, ""),
            ],
        )
        .unwrap();
        Agent::new(model, 16)
    }

    #[test]
    fn unknown_ids_are_skipped_and_counted() {
        let a = agent();
        a.ingest_line("2020-01-01T00:00:00.000Z|g1|25|nope|1|light|red\n").unwrap();
        let buf = a.buffer_snapshot();
        assert_eq!(buf.len(), 2);
        assert_eq!(a.counters().unknown_items, 1);
    }

    #[test]
    fn malformed_and_heartbeat_lines_leave_the_buffer_alone() {
        let a = agent();
        assert!(a.ingest_line("badline\n").is_err());
        assert_eq!(a.ingest_line("* PONG 10000\n").unwrap(), Line::Heartbeat("PONG 10000".into()));
        assert!(a.buffer_snapshot().is_empty());
        assert_eq!(a.counters().malformed_lines, 1);
        assert_eq!(a.counters().heartbeats, 1);
    }

    #[test]
    fn instance_ids_differ() {
        assert_ne!(agent().instance_id(), agent().instance_id());
    }

    #[test]
    fn disconnect_marks_observed_items_once() {
        let a = agent();
        a.ingest_line("2020-01-01T00:00:00.000Z|g1|25\n").unwrap();
        a.mark_unavailable(Utc::now());
        a.mark_unavailable(Utc::now());
        let buf = a.buffer_snapshot();
        assert_eq!(buf.len(), 2);
        assert_eq!(buf.current(None).unwrap()["g1"].value, UNAVAILABLE);
    }
}
