use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReadingKind {
    CircularGauge,
    LinearGauge,
    SevenSegment,
    GlyphText,
    Knob,
    Toggle,
    SafetyLight,
    LiquidLevel,
    FixtureState,
    PartQuality,
}

impl ReadingKind {
    pub const ALL: [ReadingKind; 10] = [
        ReadingKind::CircularGauge,
        ReadingKind::LinearGauge,
        ReadingKind::SevenSegment,
        ReadingKind::GlyphText,
        ReadingKind::Knob,
        ReadingKind::Toggle,
        ReadingKind::SafetyLight,
        ReadingKind::LiquidLevel,
        ReadingKind::FixtureState,
        ReadingKind::PartQuality,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ReadingKind::CircularGauge => "circular_gauge",
            ReadingKind::LinearGauge => "linear_gauge",
            ReadingKind::SevenSegment => "seven_segment",
            ReadingKind::GlyphText => "glyph_text",
            ReadingKind::Knob => "knob",
            ReadingKind::Toggle => "toggle",
            ReadingKind::SafetyLight => "safety_light",
            ReadingKind::LiquidLevel => "liquid_level",
            ReadingKind::FixtureState => "fixture_state",
            ReadingKind::PartQuality => "part_quality",
        }
    }

    /// Whether readings of this kind carry a number rather than a token.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            ReadingKind::CircularGauge | ReadingKind::LinearGauge | ReadingKind::LiquidLevel
        )
    }
}

impl std::fmt::Display for ReadingKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ReadingKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ReadingKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown artifact kind '{s}'"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ReadingValue {
    Number(f64),
    Text(String),
}

impl ReadingValue {
    pub fn as_number(&self) -> Option<f64> {
        match self {
            ReadingValue::Number(v) => Some(*v),
            ReadingValue::Text(_) => None,
        }
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            ReadingValue::Text(s) => Some(s),
            ReadingValue::Number(_) => None,
        }
    }
}

impl From<f64> for ReadingValue {
    fn from(v: f64) -> Self {
        ReadingValue::Number(v)
    }
}

impl From<&str> for ReadingValue {
    fn from(s: &str) -> Self {
        ReadingValue::Text(s.to_string())
    }
}

impl From<String> for ReadingValue {
    fn from(s: String) -> Self {
        ReadingValue::Text(s)
    }
}

/// What a reader extracts from one region of interest.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    pub value: ReadingValue,
    /// In `[0, 1]`.
    pub confidence: f64,
}

impl Observation {
    pub fn new(value: impl Into<ReadingValue>, confidence: f64) -> Self {
        Self {
            value: value.into(),
            confidence: clamp_unit(confidence),
        }
    }
}

pub(crate) fn clamp_unit(v: f64) -> f64 {
    if v.is_nan() {
        0.0
    } else {
        v.clamp(0.0, 1.0)
    }
}

/// One digitized observation of one artifact at one instant.
///
/// `value` is `None` for not-found outcomes, which always carry confidence 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reading {
    pub artifact_id: String,
    pub kind: ReadingKind,
    pub value: Option<ReadingValue>,
    pub units: String,
    pub timestamp: DateTime<Utc>,
    pub confidence: f64,
}

impl Reading {
    pub fn observed(
        artifact_id: &str,
        kind: ReadingKind,
        units: &str,
        timestamp: DateTime<Utc>,
        obs: Observation,
    ) -> Self {
        Self {
            artifact_id: artifact_id.to_string(),
            kind,
            value: Some(obs.value),
            units: units.to_string(),
            timestamp,
            confidence: clamp_unit(obs.confidence),
        }
    }

    pub fn not_found(artifact_id: &str, kind: ReadingKind, units: &str, timestamp: DateTime<Utc>) -> Self {
        Self {
            artifact_id: artifact_id.to_string(),
            kind,
            value: None,
            units: units.to_string(),
            timestamp,
            confidence: 0.0,
        }
    }
}
