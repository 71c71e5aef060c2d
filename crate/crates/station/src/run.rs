//! The acquisition/processing loop: one producer pacing frames into a
//! freshest-frame slot, one worker draining it.

use std::collections::{BTreeMap, VecDeque};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use panel_imaging::ImageBuffer;
use panel_readers::Reading;
use parking_lot::{Condvar, Mutex, RwLock};
use serde::Serialize;

use crate::error::{ConfigErrors, SourceError, StationError};
use crate::json::ReadingRecord;
use crate::pipeline::Station;
use crate::source::{FrameSource, SourceFrame};

/// Latencies kept for the percentile window.
pub const LATENCY_WINDOW: usize = 65_536;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct LatencyStats {
    pub p50_ms: f64,
    pub p95_ms: f64,
    pub max_ms: f64,
}

/// Nearest-rank percentile of unsorted samples; 0 when empty.
pub fn percentile(samples: &[f64], p: f64) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    let mut v = samples.to_vec();
    v.sort_by(f64::total_cmp);
    let rank = ((p / 100.0) * v.len() as f64).ceil() as usize;
    v[rank.clamp(1, v.len()) - 1]
}

impl LatencyStats {
    pub fn from_samples(samples: &[f64]) -> Self {
        Self {
            p50_ms: percentile(samples, 50.0),
            p95_ms: percentile(samples, 95.0),
            max_ms: samples.iter().copied().fold(0.0, f64::max),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct RunSummary {
    /// Frames processed.
    pub frames: u64,
    /// Frames replaced in the slot before the worker took them.
    pub drops: u64,
    pub readings: u64,
    pub tick_errors: u64,
    pub source_errors: u64,
    pub latency: LatencyStats,
}

#[derive(Debug, Clone, Serialize)]
pub struct StatsSnapshot {
    pub station_id: String,
    pub config_version: u64,
    #[serde(flatten)]
    pub summary: RunSummary,
    /// Latest reading per data item.
    pub last_readings: BTreeMap<String, ReadingRecord>,
}

#[derive(Default)]
struct Counters {
    summary: RunSummary,
    latencies: VecDeque<f64>,
    last: BTreeMap<String, Reading>,
}

/// Shared state of a running station: swappable config, live counters and
/// the latest raw frame.
pub struct StationHandle {
    station: RwLock<(u64, Arc<Station>)>,
    counters: Mutex<Counters>,
    latest_frame: Mutex<Option<Arc<ImageBuffer>>>,
    stop: AtomicBool,
}

impl StationHandle {
    pub fn new(station: Station) -> Arc<Self> {
        Arc::new(Self {
            station: RwLock::new((1, Arc::new(station))),
            counters: Mutex::new(Counters::default()),
            latest_frame: Mutex::new(None),
            stop: AtomicBool::new(false),
        })
    }

    pub fn station(&self) -> Arc<Station> {
        self.station.read().1.clone()
    }

    pub fn config_version(&self) -> u64 {
        self.station.read().0
    }

    /// Validates then swaps in a whole new config; the running worker picks
    /// it up at its next tick. On error nothing changes.
    pub fn replace_config(&self, station: Station) -> u64 {
        let mut guard = self.station.write();
        guard.0 += 1;
        guard.1 = Arc::new(station);
        guard.0
    }

    pub fn try_replace_config(&self, cfg: crate::StationConfig) -> Result<u64, ConfigErrors> {
        Ok(self.replace_config(Station::new(cfg)?))
    }

    pub fn latest_frame(&self) -> Option<Arc<ImageBuffer>> {
        self.latest_frame.lock().clone()
    }

    pub fn request_stop(&self) {
        self.stop.store(true, Ordering::SeqCst);
    }

    pub fn stop_requested(&self) -> bool {
        self.stop.load(Ordering::SeqCst)
    }

    pub fn summary(&self) -> RunSummary {
        let c = self.counters.lock();
        let mut s = c.summary.clone();
        let samples: Vec<f64> = c.latencies.iter().copied().collect();
        s.latency = LatencyStats::from_samples(&samples);
        s
    }

    pub fn stats(&self) -> StatsSnapshot {
        let (version, station) = {
            let g = self.station.read();
            (g.0, g.1.clone())
        };
        let station_id = station.config().station_id.clone();
        let last_readings = {
            let c = self.counters.lock();
            c.last
                .iter()
                .map(|(k, r)| (k.clone(), ReadingRecord::new(&station_id, r)))
                .collect()
        };
        StatsSnapshot {
            station_id,
            config_version: version,
            summary: self.summary(),
            last_readings,
        }
    }

    fn record(&self, readings: &[Reading], latency: Duration) {
        let mut c = self.counters.lock();
        c.summary.frames += 1;
        c.summary.readings += readings.len() as u64;
        if c.latencies.len() == LATENCY_WINDOW {
            c.latencies.pop_front();
        }
        c.latencies.push_back(latency.as_secs_f64() * 1000.0);
        for r in readings {
            c.last.insert(r.artifact_id.clone(), r.clone());
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    /// Frames per second the producer releases; `None` releases as fast as
    /// the source yields (the slot policy still applies).
    pub pace_fps: Option<u32>,
}

struct Pending {
    index: u64,
    frame: SourceFrame,
    published: Instant,
}

#[derive(Default)]
struct Slot {
    pending: Option<Pending>,
    done: bool,
    fault: Option<SourceError>,
}

/// Runs until the source is exhausted or a stop is requested. `sink` sees
/// each tick's readings in declaration order.
pub fn run_station(
    handle: &Arc<StationHandle>,
    mut source: Box<dyn FrameSource>,
    opts: RunOptions,
    mut sink: impl FnMut(&Station, &[Reading]),
) -> Result<RunSummary, StationError> {
    let slot = Arc::new((Mutex::new(Slot::default()), Condvar::new()));
    let producer = {
        let slot = slot.clone();
        let handle = handle.clone();
        std::thread::Builder::new()
            .name("frame-producer".into())
            .spawn(move || produce(&mut *source, &slot, &handle, opts))
            .expect("spawn frame producer")
    };

    let (lock, cvar) = &*slot;
    let fault = loop {
        let next = {
            let mut s = lock.lock();
            loop {
                if let Some(p) = s.pending.take() {
                    break Some(p);
                }
                if s.done || handle.stop_requested() {
                    break None;
                }
                cvar.wait_for(&mut s, Duration::from_millis(50));
            }
        };
        let Some(p) = next else {
            break lock.lock().fault.take();
        };
        let image = Arc::new(p.frame.image);
        *handle.latest_frame.lock() = Some(image.clone());
        let station = handle.station();
        match station.run_tick(&image, p.frame.timestamp, p.index) {
            Ok(readings) => {
                sink(&station, &readings);
                handle.record(&readings, p.published.elapsed());
            }
            Err(e) => {
                log::warn!("frame {}: {e}", p.index);
                handle.counters.lock().summary.tick_errors += 1;
            }
        }
    };
    handle.request_stop();
    cvar.notify_all();
    let _ = producer.join();
    match fault {
        Some(e) => Err(e.into()),
        None => Ok(handle.summary()),
    }
}

fn produce(source: &mut dyn FrameSource, slot: &(Mutex<Slot>, Condvar), handle: &StationHandle, opts: RunOptions) {
    let (lock, cvar) = slot;
    let start = Instant::now();
    let mut index = 0u64;
    let fault = loop {
        if handle.stop_requested() {
            break None;
        }
        let frame = match source.next_frame() {
            None => break None,
            Some(Ok(f)) => f,
            Some(Err(e @ (SourceError::Image { .. } | SourceError::Io { .. }))) => {
                log::warn!("skipping frame: {e}");
                handle.counters.lock().summary.source_errors += 1;
                index += 1;
                continue;
            }
            Some(Err(e)) => break Some(e),
        };
        if let Some(fps) = opts.pace_fps.filter(|&f| f > 0) {
            let due = start + Duration::from_secs_f64(index as f64 / f64::from(fps));
            while let Some(wait) = due.checked_duration_since(Instant::now()) {
                if handle.stop_requested() {
                    break;
                }
                std::thread::sleep(wait.min(Duration::from_millis(10)));
            }
        }
        {
            let mut s = lock.lock();
            if s.pending.is_some() {
                handle.counters.lock().summary.drops += 1;
            }
            s.pending = Some(Pending {
                index,
                frame,
                published: Instant::now(),
            });
        }
        cvar.notify_all();
        index += 1;
    };
    // Let the worker drain the last frame before it sees `done`.
    let mut s = lock.lock();
    s.done = true;
    s.fault = fault;
    drop(s);
    cvar.notify_all();
}
