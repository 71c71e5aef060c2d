use std::time::Duration;

use chrono::{DateTime, DurationRound, TimeDelta, Utc};
use panel_imaging::{crop_roi, warp_perspective, Homography, ImageBuffer};
use panel_readers::{Outcome, Reading};
use rayon::prelude::*;

use crate::config::{fixture_item_id, ArtifactConfig, Perspective, StationConfig};
use crate::error::{ConfigErrors, TickError};

/// A validated config with its homographies precomputed.
#[derive(Debug, Clone)]
pub struct Station {
    cfg: StationConfig,
    panel: Option<Homography>,
    overrides: Vec<Option<Homography>>,
    tick_delay: Option<Duration>,
}

fn homography(p: &Perspective) -> Homography {
    p.homography().expect("validated perspectives are invertible")
}

impl Station {
    pub fn new(cfg: StationConfig) -> Result<Self, ConfigErrors> {
        cfg.validate()?;
        let panel = cfg.perspective.as_ref().map(homography);
        let overrides = cfg
            .artifacts
            .iter()
            .map(|a| a.perspective.as_ref().map(homography))
            .collect();
        Ok(Self {
            cfg,
            panel,
            overrides,
            tick_delay: None,
        })
    }

    /// Test hook: sleeps this long inside every tick that reads at least one artifact.
    pub fn with_tick_delay(mut self, delay: Duration) -> Self {
        self.tick_delay = Some(delay);
        self
    }

    pub fn config(&self) -> &StationConfig {
        &self.cfg
    }

    pub fn into_config(self) -> StationConfig {
        self.cfg
    }

    fn check_size(&self, frame: &ImageBuffer) -> Result<(), TickError> {
        let want = self.cfg.frame_size;
        if frame.width() != want.width || frame.height() != want.height {
            return Err(TickError::FrameSize {
                got_w: frame.width(),
                got_h: frame.height(),
                want_w: want.width,
                want_h: want.height,
            });
        }
        Ok(())
    }

    /// The frame rectified onto the panel plane (the frame itself without a perspective).
    pub fn correct(&self, frame: &ImageBuffer) -> Result<ImageBuffer, TickError> {
        self.check_size(frame)?;
        match (&self.panel, &self.cfg.perspective) {
            (Some(h), Some(p)) => Ok(warp_perspective(frame, h, p.width, p.height)?),
            _ => Ok(frame.clone()),
        }
    }

    /// The ROI image a reader of `artifacts[index]` sees for `frame`.
    pub fn artifact_roi(&self, frame: &ImageBuffer, index: usize) -> Result<ImageBuffer, TickError> {
        let corrected = self.correct(frame)?;
        self.crop(frame, &corrected, index)
    }

    fn crop(&self, frame: &ImageBuffer, corrected: &ImageBuffer, index: usize) -> Result<ImageBuffer, TickError> {
        let a = &self.cfg.artifacts[index];
        match (&self.overrides[index], &a.perspective) {
            (Some(h), Some(p)) => Ok(crop_roi(&warp_perspective(frame, h, p.width, p.height)?, a.roi)?),
            _ => Ok(crop_roi(corrected, a.roi)?),
        }
    }

    /// Reads every artifact due on `tick_index`, in declaration order.
    pub fn run_tick(&self, frame: &ImageBuffer, ts: DateTime<Utc>, tick_index: u64) -> Result<Vec<Reading>, TickError> {
        let due: Vec<usize> = (0..self.cfg.artifacts.len())
            .filter(|&i| tick_index % u64::from(self.cfg.artifacts[i].sample_divisor) == 0)
            .collect();
        self.check_size(frame)?;
        if due.is_empty() {
            return Ok(Vec::new());
        }
        let ts = truncate_to_millis(ts);
        let corrected = self.correct(frame)?;
        let per_artifact: Vec<Result<Vec<Reading>, TickError>> = due
            .par_iter()
            .map(|&i| {
                let roi = self.crop(frame, &corrected, i)?;
                Ok(read_artifact(&self.cfg.artifacts[i], &roi, ts))
            })
            .collect();
        if let Some(d) = self.tick_delay {
            std::thread::sleep(d);
        }
        let mut out = Vec::with_capacity(due.len());
        for r in per_artifact {
            out.extend(r?);
        }
        Ok(out)
    }
}

pub fn truncate_to_millis(ts: DateTime<Utc>) -> DateTime<Utc> {
    ts.duration_trunc(TimeDelta::milliseconds(1)).unwrap_or(ts)
}

/// Readings for one artifact; reader errors become not-found readings.
pub fn read_artifact(a: &ArtifactConfig, roi: &ImageBuffer, ts: DateTime<Utc>) -> Vec<Reading> {
    let kind = a.kind();
    match a.reader.read(roi) {
        Ok(Outcome::Single(obs)) => vec![Reading::observed(&a.artifact_id, kind, &a.units, ts, obs)],
        Ok(Outcome::Fixtures(insp)) => {
            let overall = panel_readers::Observation::new(insp.overall(), insp.confidence());
            let mut out = vec![Reading::observed(&a.artifact_id, kind, &a.units, ts, overall)];
            out.extend(insp.fixtures.iter().map(|f| {
                let obs = panel_readers::Observation::new(f.label(), f.confidence);
                Reading::observed(&fixture_item_id(&a.artifact_id, &f.id), kind, &a.units, ts, obs)
            }));
            out
        }
        Err(e) => {
            if !e.is_not_found() {
                log::warn!("artifact '{}': {e}", a.artifact_id);
            }
            a.data_item_ids()
                .iter()
                .map(|id| Reading::not_found(id, kind, &a.units, ts))
                .collect()
        }
    }
}
