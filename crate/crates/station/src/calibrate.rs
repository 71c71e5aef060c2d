//! Derives a complete station config for a mock panel the way an operator
//! would: measure geometry on the rectified panel and capture reference
//! states through the same camera and correction as live frames.

use std::collections::BTreeMap;

use panel_imaging::{crop_roi, match_template_ssd, threshold, to_grayscale, warp_perspective, BoundingBox, Homography, ImageBuffer, Point2};
use panel_mock::artifacts::{
    box_center, fixture_box, fixture_slots, lamp_layout, linear_scale_ends, vessel_geometry,
};
use panel_mock::{
    font, render_panel, sequence_epoch, tilt_homography, ArtifactSpec, FixturePose, LampColor as MockLamp,
    MockArtifact, Orientation, PanelSpec, PartState, StateValue, ToggleState,
};
use panel_readers::glyph::ink_columns;
use panel_readers::{
    Axis, CircularGaugeParams, FixtureParams, FixtureSpec, GaugeCalibration, GlyphTemplate, GlyphTextParams,
    KnobDetent, KnobParams, LampColor, LampZone, LinearGaugeParams, LiquidLevelParams, NeedleParams,
    PartQualityParams, ReaderConfig, SafetyLightParams, SevenSegmentParams, StateTemplate, ToggleParams,
};

use crate::config::{ArtifactConfig, FrameSize, FrameSourceConfig, Perspective, StationConfig, SCHEMA_VERSION};
use crate::error::StationError;

/// Rows of the liquid-surface template.
pub const SURFACE_TEMPLATE_ROWS: usize = 16;
/// Rotation of the deliberately misaligned fixture reference capture.
pub const FIXTURE_REFERENCE_ROTATION_DEG: f64 = 12.0;

#[derive(Debug, Clone)]
pub struct CalibrationOptions {
    pub station_id: String,
    pub frame_source: FrameSourceConfig,
    /// Units per artifact id; missing ids get none.
    pub units: BTreeMap<String, String>,
}

impl CalibrationOptions {
    pub fn new(station_id: &str, frame_source: FrameSourceConfig) -> Self {
        Self {
            station_id: station_id.to_string(),
            frame_source,
            units: BTreeMap::new(),
        }
    }
}

/// The panel's rectification when its camera is tilted.
pub fn mock_perspective(spec: &PanelSpec) -> Result<Option<Perspective>, StationError> {
    match spec.tilt {
        Some(t) if t.yaw_deg != 0.0 || t.pitch_deg != 0.0 => {
            let (_, corners) = tilt_homography(spec.width, spec.height, t).map_err(|e| calibration_error("perspective", e))?;
            Ok(Some(Perspective {
                src: corners,
                width: spec.width,
                height: spec.height,
            }))
        }
        _ => Ok(None),
    }
}

fn calibration_error(artifact: &str, e: impl std::fmt::Display) -> StationError {
    StationError::Calibration {
        artifact: artifact.to_string(),
        message: e.to_string(),
    }
}

/// Renders reference states. Sensor noise is left out, as if each reference
/// were averaged over many frames; glare and tilt stay.
struct Rig {
    clean: PanelSpec,
    correction: Option<(Homography, usize, usize)>,
}

impl Rig {
    fn new(spec: &PanelSpec, perspective: Option<&Perspective>) -> Result<Self, StationError> {
        let mut clean = spec.clone();
        if let Some(n) = &mut clean.noise {
            n.gaussian_sigma = 0.0;
        }
        let correction = match perspective {
            Some(p) => Some((p.homography().map_err(|e| calibration_error("perspective", e))?, p.width, p.height)),
            None => None,
        };
        Ok(Self { clean, correction })
    }

    fn capture_spec(&self, spec: &PanelSpec, roi: BoundingBox) -> Result<ImageBuffer, StationError> {
        let (frame, _) = render_panel(spec, sequence_epoch()).map_err(|e| calibration_error("capture", e))?;
        let corrected = match &self.correction {
            Some((h, w, hgt)) => warp_perspective(&frame, h, *w, *hgt).map_err(|e| calibration_error("capture", e))?,
            None => frame,
        };
        crop_roi(&corrected, roi).map_err(|e| calibration_error("capture", e))
    }

    /// The ROI of artifact `id` with its state replaced.
    fn capture(&self, a: &ArtifactSpec, state: StateValue) -> Result<ImageBuffer, StationError> {
        let spec = self.clean.with_state(&a.id, state).map_err(|e| calibration_error(&a.id, e))?;
        self.capture_spec(&spec, a.placement)
    }
}

fn shift(p: Point2, roi: BoundingBox) -> Point2 {
    Point2::new(p.x - roi.x as f64, p.y - roi.y as f64)
}

fn to_gray(img: &ImageBuffer, id: &str) -> Result<ImageBuffer, StationError> {
    to_grayscale(img).map_err(|e| calibration_error(id, e))
}

fn ssd(img: &ImageBuffer, tmpl: &ImageBuffer, area: BoundingBox, id: &str) -> Result<(Point2, f64), StationError> {
    let (m, _) = match_template_ssd(img, tmpl, area).map_err(|e| calibration_error(id, e))?;
    Ok((m.top_left, m.normalized_score))
}

/// A station config reading every artifact of `spec`.
pub fn calibrate_mock(spec: &PanelSpec, opts: &CalibrationOptions) -> Result<StationConfig, StationError> {
    spec.validate().map_err(|e| calibration_error("panel", e))?;
    let perspective = mock_perspective(spec)?;
    let rig = Rig::new(spec, perspective.as_ref())?;
    let mut artifacts = Vec::with_capacity(spec.artifacts.len());
    for a in &spec.artifacts {
        artifacts.push(ArtifactConfig {
            artifact_id: a.id.clone(),
            reader: calibrate_artifact(&rig, a)?,
            roi: a.placement,
            units: opts.units.get(&a.id).cloned().unwrap_or_default(),
            sample_divisor: 1,
            perspective: None,
        });
    }
    let cfg = StationConfig {
        schema_version: SCHEMA_VERSION,
        station_id: opts.station_id.clone(),
        frame_source: opts.frame_source.clone(),
        frame_size: FrameSize {
            width: spec.width,
            height: spec.height,
        },
        perspective,
        artifacts,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn calibrate_artifact(rig: &Rig, a: &ArtifactSpec) -> Result<ReaderConfig, StationError> {
    let roi = a.placement;
    let origin = BoundingBox::new(0, 0, roi.width, roi.height);
    Ok(match &a.artifact {
        MockArtifact::CircularGauge { style, .. } => ReaderConfig::CircularGauge(CircularGaugeParams {
            calibration: GaugeCalibration::circular(
                shift(box_center(roi), roi),
                style.min_angle_deg.to_radians(),
                style.max_angle_deg.to_radians(),
                style.min,
                style.max,
            ),
            needle: NeedleParams::default(),
        }),
        MockArtifact::LinearGauge { style, .. } => {
            let (lo, hi) = linear_scale_ends(roi, style);
            let (axis, offset) = match style.orientation {
                Orientation::Horizontal => (Axis::Horizontal, roi.x as f64),
                Orientation::Vertical => (Axis::Vertical, roi.y as f64),
            };
            ReaderConfig::LinearGauge(LinearGaugeParams {
                calibration: GaugeCalibration::linear(axis, lo - offset, hi - offset, style.min, style.max),
                needle: NeedleParams::default(),
                max_skew_deg: 15.0,
                axis_position: None,
            })
        }
        MockArtifact::SevenSegment { text, .. } => ReaderConfig::SevenSegment(SevenSegmentParams::new(text.len())),
        MockArtifact::GlyphText { scale, .. } => ReaderConfig::GlyphText(glyph_library(rig, a, *scale)?),
        MockArtifact::Knob { style, .. } => ReaderConfig::Knob(KnobParams {
            pivot: shift(box_center(roi), roi),
            detents: style
                .detents
                .iter()
                .map(|d| KnobDetent {
                    label: d.label.clone(),
                    angle_deg: d.angle_deg,
                })
                .collect(),
            needle: NeedleParams::default(),
        }),
        MockArtifact::Toggle { .. } => {
            let mut states = Vec::new();
            for s in [ToggleState::Up, ToggleState::Down] {
                let template = rig.capture(a, StateValue::Text(s.label().to_string()))?;
                states.push(StateTemplate {
                    label: s.label().to_string(),
                    template: template.into(),
                });
            }
            ReaderConfig::Toggle(ToggleParams { states })
        }
        MockArtifact::SafetyLight { .. } => {
            let (lamps, r) = lamp_layout(roi);
            let side = (1.2 * r).round().max(1.0) as usize;
            let zones = lamps
                .iter()
                .map(|&(color, center)| {
                    let c = shift(center, roi);
                    let x = (c.x - (side as f64 - 1.0) / 2.0).round().max(0.0) as usize;
                    let y = (c.y - (side as f64 - 1.0) / 2.0).round().max(0.0) as usize;
                    LampZone {
                        color: reader_lamp(color),
                        zone: BoundingBox::new(x, y, side, side),
                    }
                })
                .collect();
            ReaderConfig::SafetyLight(SafetyLightParams::new(zones))
        }
        MockArtifact::LiquidVessel { style, .. } => {
            let g = vessel_geometry(roi);
            let (ix0, _, ix1, _) = g.interior;
            // Whole pixels strictly inside the walls.
            let x0 = (ix0 - roi.x as f64 + 0.5).ceil() as usize;
            let x1 = (ix1 - roi.x as f64 + 0.5).floor() as usize;
            let column = BoundingBox::new(x0, 0, x1 - x0, roi.height);
            let mid = rig.capture(a, StateValue::Number((style.min + style.max) / 2.0))?;
            let mid_row = panel_mock::artifacts::liquid_surface_row(roi, style, (style.min + style.max) / 2.0) - roi.y as f64;
            let top = (mid_row + 0.5).round() as usize - SURFACE_TEMPLATE_ROWS / 2;
            let template = crop_roi(&mid, BoundingBox::new(x0, top, x1 - x0, SURFACE_TEMPLATE_ROWS))
                .map_err(|e| calibration_error(&a.id, e))?;
            let (zero, _) = ssd(&rig.capture(a, StateValue::Number(style.min))?, &template, column, &a.id)?;
            let (full, _) = ssd(&rig.capture(a, StateValue::Number(style.max))?, &template, column, &a.id)?;
            if zero.y <= full.y {
                return Err(calibration_error(&a.id, "surface does not rise with level"));
            }
            ReaderConfig::LiquidLevel(LiquidLevelParams {
                surface_template: template.into(),
                zero_reference: zero.y,
                min_level: style.min,
                scale: (style.max - style.min) / (zero.y - full.y),
                search_column: column,
                reject_threshold: 0.08,
            })
        }
        MockArtifact::FixtureBed { fixtures } => {
            let nominal: Vec<FixturePose> = fixtures.iter().map(|f| FixturePose::nominal(&f.id)).collect();
            let good = rig.capture(a, StateValue::Fixtures(nominal.clone()))?;
            let rotated: Vec<FixturePose> = nominal
                .iter()
                .map(|f| FixturePose {
                    rotation_deg: FIXTURE_REFERENCE_ROTATION_DEG,
                    ..f.clone()
                })
                .collect();
            let bad = rig.capture(a, StateValue::Fixtures(rotated))?;
            let mut specs = Vec::new();
            let mut worst_bad = f64::INFINITY;
            let mut params = FixtureParams {
                fixtures: Vec::new(),
                misalign_threshold: 1.0,
                search_margin: 0.25,
                center_tolerance: 3.0,
            };
            for (pose, slot) in fixtures.iter().zip(fixture_slots(roi)) {
                let b = fixture_box(slot);
                let expected = BoundingBox::new(b.x - roi.x, b.y - roi.y, b.width, b.height);
                let template = crop_roi(&good, expected).map_err(|e| calibration_error(&a.id, e))?;
                let area = params.search_area(&expected, roi.width, roi.height);
                let (_, score) = ssd(&bad, &template, area, &a.id)?;
                worst_bad = worst_bad.min(score);
                specs.push(FixtureSpec {
                    id: pose.id.clone(),
                    expected_box: expected,
                    template: template.into(),
                });
            }
            params.fixtures = specs;
            if worst_bad.is_finite() {
                params.misalign_threshold = (worst_bad / 2.0).clamp(1e-4, 1.0);
            }
            ReaderConfig::FixtureState(params)
        }
        MockArtifact::Part { .. } => {
            let good = rig.capture(a, part_state(PartState::Good))?;
            let mut nearest_defect = f64::INFINITY;
            for s in [PartState::Partial, PartState::Unmachined] {
                let (_, score) = ssd(&rig.capture(a, part_state(s))?, &good, origin, &a.id)?;
                nearest_defect = nearest_defect.min(score);
            }
            if !(nearest_defect > 0.0) {
                return Err(calibration_error(&a.id, "defect references match the good part"));
            }
            ReaderConfig::PartQuality(PartQualityParams::new(good, (nearest_defect / 2.0).min(1.0)))
        }
    })
}

fn part_state(s: PartState) -> StateValue {
    StateValue::Text(serde_json::to_value(s).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default())
}

fn reader_lamp(c: MockLamp) -> LampColor {
    match c {
        MockLamp::Red => LampColor::Red,
        MockLamp::Yellow => LampColor::Yellow,
        MockLamp::Green => LampColor::Green,
    }
}

/// One template per supported character, cut from captures of the display
/// showing the characters spaced apart.
fn glyph_library(rig: &Rig, a: &ArtifactSpec, scale: usize) -> Result<GlyphTextParams, StationError> {
    let params = GlyphTextParams::new(Vec::new());
    let chars: Vec<char> = font::supported_chars().filter(|&c| c != ' ').collect();
    let fits = |k: usize| font::text_width(&"X ".repeat(k)[..2 * k - 1], scale) + 4 <= a.placement.width;
    let mut per_capture = 1;
    while per_capture < chars.len() && fits(per_capture + 1) {
        per_capture += 1;
    }
    if !fits(1) {
        return Err(calibration_error(&a.id, "display too narrow for one glyph"));
    }
    let mut library = Vec::with_capacity(chars.len());
    for batch in chars.chunks(per_capture) {
        let text: String = batch.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ");
        let gray = to_gray(&rig.capture(a, StateValue::Text(text.clone()))?, &a.id)?;
        let bin = threshold(&gray, params.ink_threshold, params.ink_mode).map_err(|e| calibration_error(&a.id, e))?;
        let runs = ink_columns(&bin);
        if runs.len() != batch.len() {
            return Err(calibration_error(
                &a.id,
                format!("'{text}' shows {} ink runs, expected {}", runs.len(), batch.len()),
            ));
        }
        for (&ch, &(x0, x1)) in batch.iter().zip(&runs) {
            let image = crop_roi(&gray, BoundingBox::new(x0, 0, x1 - x0, gray.height()))
                .map_err(|e| calibration_error(&a.id, e))?;
            library.push(GlyphTemplate { ch, image: image.into() });
        }
    }
    Ok(GlyphTextParams { library, ..params })
}
