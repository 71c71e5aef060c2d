//! Side-effect-free reader previews for parameter tuning.

use std::collections::BTreeMap;

use chrono::Utc;
use panel_imaging::{extract_contours, match_template_ssd, to_grayscale, BoundingBox, ImageBuffer};
use panel_mock::{render_panel, sequence_epoch, PanelSpec, StateValue};
use panel_readers::{EncodedImage, ReaderConfig};
use panel_station::{ArtifactConfig, ConfigError, FrameSize, Perspective, ReadingRecord, Station, StationConfig};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PreviewRequest {
    pub frame: FrameRef,
    /// The candidate artifact, validated exactly like a config entry.
    pub artifact: ArtifactConfig,
    /// Replaces the station's panel perspective for this preview only.
    #[serde(default)]
    pub perspective: Option<Perspective>,
    #[serde(default)]
    pub mode: PreviewMode,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum FrameRef {
    /// The pipeline's most recent raw frame.
    Latest,
    /// A mock render of `spec` with `states` applied.
    Mock {
        spec: PanelSpec,
        #[serde(default)]
        states: BTreeMap<String, StateValue>,
    },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PreviewMode {
    #[default]
    Reading,
    Intermediates,
}

#[derive(Debug, Clone, Serialize)]
pub struct PreviewResponse {
    pub readings: Vec<ReadingRecord>,
    /// The reader's failure, when it produced no value.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Base64 PNGs keyed by stage: `corrected`, `roi`, `threshold`, `contours`, `match`.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub intermediates: BTreeMap<&'static str, EncodedImage>,
}

#[derive(Debug)]
pub enum PreviewError {
    /// Path-qualified problems with the request.
    Invalid(Vec<ConfigError>),
    NoFrame,
}

fn invalid(path: &str, message: impl ToString) -> PreviewError {
    PreviewError::Invalid(vec![ConfigError {
        path: path.to_string(),
        message: message.to_string(),
    }])
}

/// Resolves a mock frame reference to its rendered image.
pub fn render_mock_frame(spec: &PanelSpec, states: &BTreeMap<String, StateValue>) -> Result<ImageBuffer, PreviewError> {
    let mut spec = spec.clone();
    for (id, state) in states {
        spec = spec
            .with_state(id, state.clone())
            .map_err(|e| invalid(&format!("frame.states.{id}"), e))?;
    }
    render_panel(&spec, sequence_epoch())
        .map(|(img, _)| img)
        .map_err(|e| invalid("frame.spec", e))
}

/// Runs the candidate artifact alone on `frame` against a throwaway station
/// built from `base`; nothing about the running pipeline changes.
pub fn preview(base: &StationConfig, frame: &ImageBuffer, req: &PreviewRequest) -> Result<PreviewResponse, PreviewError> {
    let cfg = StationConfig {
        frame_size: FrameSize {
            width: frame.width(),
            height: frame.height(),
        },
        perspective: req.perspective.clone().or_else(|| base.perspective.clone()),
        artifacts: vec![req.artifact.clone()],
        ..base.clone()
    };
    let station = Station::new(cfg).map_err(|errs| {
        PreviewError::Invalid(
            errs.0
                .into_iter()
                .map(|e| ConfigError {
                    path: e.path.replacen("artifacts[0]", "artifact", 1),
                    message: e.message,
                })
                .collect(),
        )
    })?;
    let station_id = &station.config().station_id;
    let readings = station
        .run_tick(frame, Utc::now(), 0)
        .map_err(|e| invalid("frame", e))?;
    let roi = station.artifact_roi(frame, 0).map_err(|e| invalid("artifact.roi", e))?;
    let error = req.artifact.reader.read(&roi).err().map(|e| e.to_string());
    let mut intermediates = BTreeMap::new();
    if req.mode == PreviewMode::Intermediates {
        if let Ok(corrected) = station.correct(frame) {
            intermediates.insert("corrected", corrected.into());
        }
        for (stage, img) in stages(&req.artifact.reader, &roi) {
            intermediates.insert(stage, img.into());
        }
        intermediates.insert("roi", roi.into());
    }
    Ok(PreviewResponse {
        readings: readings.iter().map(|r| ReadingRecord::new(station_id, r)).collect(),
        error,
        intermediates,
    })
}

fn gray(img: &ImageBuffer) -> Option<ImageBuffer> {
    if img.is_gray() {
        Some(img.clone())
    } else {
        to_grayscale(img).ok()
    }
}

/// The threshold mask with its contours, or the template score map, as
/// far as the reader kind has such stages.
fn stages(reader: &ReaderConfig, roi: &ImageBuffer) -> Vec<(&'static str, ImageBuffer)> {
    let mut out = Vec::new();
    let mask = match reader {
        ReaderConfig::CircularGauge(p) => p.needle.preprocess.binarize(roi).ok(),
        ReaderConfig::LinearGauge(p) => p.needle.preprocess.binarize(roi).ok(),
        ReaderConfig::Knob(p) => p.needle.preprocess.binarize(roi).ok(),
        ReaderConfig::PartQuality(p) => {
            gray(roi).and_then(|g| panel_imaging::threshold(&g, p.foreground_threshold, p.foreground_mode).ok())
        }
        _ => None,
    };
    if let Some(mask) = mask {
        if let Some(outlines) = contour_image(&mask) {
            out.push(("contours", outlines));
        }
        out.push(("threshold", mask));
    }
    let template = match reader {
        ReaderConfig::Toggle(p) => p.states.first().map(|s| (s.template.image(), roi.bounds())),
        ReaderConfig::PartQuality(p) => Some((p.good_template.image(), roi.bounds())),
        ReaderConfig::LiquidLevel(p) => Some((p.surface_template.image(), p.search_column)),
        ReaderConfig::FixtureState(p) => p
            .fixtures
            .first()
            .map(|f| (f.template.image(), p.search_area(&f.expected_box, roi.width(), roi.height()))),
        _ => None,
    };
    if let Some((tmpl, area)) = template {
        if let Some(map) = score_map(roi, tmpl, area) {
            out.push(("match", map));
        }
    }
    out
}

fn contour_image(mask: &ImageBuffer) -> Option<ImageBuffer> {
    let contours = extract_contours(mask).ok()?;
    let mut img = ImageBuffer::filled_rgb(mask.width(), mask.height(), [0, 0, 0]).ok()?;
    // Largest component in green, the rest in orange.
    for (i, c) in contours.iter().enumerate() {
        let color = if i == 0 { [40, 220, 60] } else { [240, 150, 30] };
        for p in &c.points {
            img.pixel_mut(p.x as usize, p.y as usize).copy_from_slice(&color);
        }
    }
    Some(img)
}

fn score_map(roi: &ImageBuffer, tmpl: &ImageBuffer, area: BoundingBox) -> Option<ImageBuffer> {
    let img = if tmpl.is_gray() { gray(roi)? } else { roi.clone() };
    match_template_ssd(&img, tmpl, area).ok().map(|(_, map)| map.to_image())
}
