use panel_imaging::ImageBuffer;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fixture::{read_fixture_state, FixtureInspection, FixtureParams};
use crate::glyph::{read_glyph_text, GlyphTextParams};
use crate::light::{read_safety_light, SafetyLightParams};
use crate::liquid::{read_liquid_level, LiquidLevelParams};
use crate::needle::{
    read_circular_gauge, read_knob, read_linear_gauge, CircularGaugeParams, KnobParams,
    LinearGaugeParams,
};
use crate::part::{read_part_quality, PartQualityParams};
use crate::reading::{Observation, ReadingKind};
use crate::segments::{read_seven_segment, SevenSegmentParams};
use crate::toggle::{read_toggle, ToggleParams};

/// Reader selection plus its parameters, tagged by `kind`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReaderConfig {
    CircularGauge(CircularGaugeParams),
    LinearGauge(LinearGaugeParams),
    SevenSegment(SevenSegmentParams),
    GlyphText(GlyphTextParams),
    Knob(KnobParams),
    Toggle(ToggleParams),
    SafetyLight(SafetyLightParams),
    LiquidLevel(LiquidLevelParams),
    FixtureState(FixtureParams),
    PartQuality(PartQualityParams),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Single(Observation),
    Fixtures(FixtureInspection),
}

impl ReaderConfig {
    pub fn kind(&self) -> ReadingKind {
        match self {
            ReaderConfig::CircularGauge(_) => ReadingKind::CircularGauge,
            ReaderConfig::LinearGauge(_) => ReadingKind::LinearGauge,
            ReaderConfig::SevenSegment(_) => ReadingKind::SevenSegment,
            ReaderConfig::GlyphText(_) => ReadingKind::GlyphText,
            ReaderConfig::Knob(_) => ReadingKind::Knob,
            ReaderConfig::Toggle(_) => ReadingKind::Toggle,
            ReaderConfig::SafetyLight(_) => ReadingKind::SafetyLight,
            ReaderConfig::LiquidLevel(_) => ReadingKind::LiquidLevel,
            ReaderConfig::FixtureState(_) => ReadingKind::FixtureState,
            ReaderConfig::PartQuality(_) => ReadingKind::PartQuality,
        }
    }

    /// Parameter problems for an ROI of the given size, empty when complete.
    pub fn problems(&self, roi_w: usize, roi_h: usize) -> Vec<String> {
        match self {
            ReaderConfig::CircularGauge(p) => {
                let mut out = p.problems();
                if let Some(pivot) = p.calibration.pivot {
                    if !(pivot.x >= 0.0 && pivot.y >= 0.0 && pivot.x < roi_w as f64 && pivot.y < roi_h as f64) {
                        out.push(format!("pivot ({}, {}) lies outside the ROI", pivot.x, pivot.y));
                    }
                }
                out
            }
            ReaderConfig::LinearGauge(p) => p.problems(),
            ReaderConfig::SevenSegment(p) => {
                let mut out = p.problems();
                if p.digit_count > roi_w {
                    out.push("ROI narrower than one pixel per digit".to_string());
                }
                out
            }
            ReaderConfig::GlyphText(p) => p.problems(),
            ReaderConfig::Knob(p) => p.problems(),
            ReaderConfig::Toggle(p) => {
                let mut out = p.problems();
                if let Some(s) = p.states.first() {
                    if s.template.0.width() > roi_w || s.template.0.height() > roi_h {
                        out.push("state templates exceed the ROI".to_string());
                    }
                }
                out
            }
            ReaderConfig::SafetyLight(p) => p.problems(roi_w, roi_h),
            ReaderConfig::LiquidLevel(p) => p.problems(roi_w, roi_h),
            ReaderConfig::FixtureState(p) => p.problems(roi_w, roi_h),
            ReaderConfig::PartQuality(p) => p.problems(roi_w, roi_h),
        }
    }

    pub fn read(&self, roi: &ImageBuffer) -> Result<Outcome> {
        let single = Outcome::Single;
        Ok(match self {
            ReaderConfig::CircularGauge(p) => single(read_circular_gauge(roi, p)?),
            ReaderConfig::LinearGauge(p) => single(read_linear_gauge(roi, p)?),
            ReaderConfig::SevenSegment(p) => single(read_seven_segment(roi, p)?),
            ReaderConfig::GlyphText(p) => single(read_glyph_text(roi, p)?),
            ReaderConfig::Knob(p) => single(read_knob(roi, p)?),
            ReaderConfig::Toggle(p) => single(read_toggle(roi, p)?),
            ReaderConfig::SafetyLight(p) => single(read_safety_light(roi, p)?),
            ReaderConfig::LiquidLevel(p) => single(read_liquid_level(roi, p)?),
            ReaderConfig::FixtureState(p) => Outcome::Fixtures(read_fixture_state(roi, p)?),
            ReaderConfig::PartQuality(p) => single(read_part_quality(roi, p)?),
        })
    }
}
