use std::collections::BTreeMap;

use chrono::{DateTime, Duration, TimeZone, Utc};
use panel_imaging::ImageBuffer;
use serde::{Deserialize, Serialize};

use crate::error::{MockError, Result};
use crate::render::render_panel;
use crate::spec::{PanelSpec, StateValue};
use crate::truth::GroundTruth;

/// Fixed epoch of every rendered sequence.
pub fn sequence_epoch() -> DateTime<Utc> {
    Utc.with_ymd_and_hms(2020, 1, 1, 0, 0, 0).unwrap()
}

/// State overrides for one frame. Deltas are cumulative: a state set in one
/// frame persists until a later frame overrides it.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FrameDelta {
    #[serde(default)]
    pub states: BTreeMap<String, StateValue>,
}

impl FrameDelta {
    pub fn set(artifact_id: &str, state: StateValue) -> Self {
        Self {
            states: BTreeMap::from([(artifact_id.to_string(), state)]),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceSpec {
    pub base: PanelSpec,
    pub fps: u32,
    pub frames: Vec<FrameDelta>,
}

impl SequenceSpec {
    /// A linear sweep of one numeric artifact from `from` to `to` over `frames` frames,
    /// both endpoints included.
    pub fn sweep(base: PanelSpec, artifact_id: &str, from: f64, to: f64, frames: usize, fps: u32) -> Self {
        let frames = (0..frames)
            .map(|i| {
                let t = if frames > 1 { i as f64 / (frames - 1) as f64 } else { 0.0 };
                FrameDelta::set(artifact_id, StateValue::Number(from + t * (to - from)))
            })
            .collect();
        Self { base, fps, frames }
    }
}

/// Timestamp of frame `index`, rounded to the millisecond.
pub fn frame_timestamp(index: usize, fps: u32) -> DateTime<Utc> {
    let ms = (index as f64 * 1000.0 / fps as f64).round() as i64;
    sequence_epoch() + Duration::milliseconds(ms)
}

#[derive(Debug, Clone)]
pub struct Frame {
    pub index: usize,
    pub timestamp: DateTime<Utc>,
    pub image: ImageBuffer,
    pub truth: GroundTruth,
}

/// Lazily renders each frame of a sequence. A sequence without deltas yields
/// the base spec once.
pub fn render_sequence(seq: &SequenceSpec) -> Result<SequenceFrames> {
    if seq.fps == 0 {
        return Err(MockError::ZeroFps);
    }
    seq.base.validate()?;
    Ok(SequenceFrames {
        seq: seq.clone(),
        current: seq.base.clone(),
        next: 0,
    })
}

pub struct SequenceFrames {
    seq: SequenceSpec,
    current: PanelSpec,
    next: usize,
}

impl SequenceFrames {
    pub fn len(&self) -> usize {
        self.seq.frames.len().max(1)
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl Iterator for SequenceFrames {
    type Item = Result<Frame>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.next >= self.len() {
            return None;
        }
        let index = self.next;
        self.next += 1;
        if let Some(delta) = self.seq.frames.get(index) {
            for (id, state) in &delta.states {
                match self.current.with_state(id, state.clone()) {
                    Ok(s) => self.current = s,
                    Err(e) => return Some(Err(e)),
                }
            }
        }
        let timestamp = frame_timestamp(index, self.seq.fps);
        Some(render_panel(&self.current, timestamp).map(|(image, truth)| Frame {
            index,
            timestamp,
            image,
            truth,
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn timestamps_at_thirty_fps() {
        let ms: Vec<i64> = (0..3)
            .map(|i| (frame_timestamp(i, 30) - sequence_epoch()).num_milliseconds())
            .collect();
        assert_eq!(ms, vec![0, 33, 67]);
        assert_eq!((frame_timestamp(90, 30) - sequence_epoch()).num_milliseconds(), 3000);
    }

    #[test]
    fn zero_fps_is_rejected() {
        let seq = SequenceSpec { base: PanelSpec::new(10, 10), fps: 0, frames: vec![] };
        assert!(matches!(render_sequence(&seq), Err(MockError::ZeroFps)));
    }
}
