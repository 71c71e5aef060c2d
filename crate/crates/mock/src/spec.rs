use std::collections::HashSet;

use panel_imaging::BoundingBox;
use serde::{Deserialize, Serialize};

use crate::error::{MockError, Result};
use crate::raster::Rgb;

pub const DEFAULT_SEED: u64 = 0x5eed_0f_5eed;

/// Largest fixture displacement still counted as aligned.
pub const ALIGNED_OFFSET_PX: f64 = 2.0;
/// Largest fixture rotation still counted as aligned.
pub const ALIGNED_ROTATION_DEG: f64 = 3.0;

/// A mock-panel scene: canvas, artifacts with their true states, optional
/// noise and camera tilt.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PanelSpec {
    pub width: usize,
    pub height: usize,
    #[serde(default = "default_background")]
    pub background: Rgb,
    #[serde(default)]
    pub artifacts: Vec<ArtifactSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise: Option<NoiseSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tilt: Option<Tilt>,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

fn default_background() -> Rgb {
    [96, 104, 112]
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

impl PanelSpec {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            background: default_background(),
            artifacts: Vec::new(),
            noise: None,
            tilt: None,
            seed: DEFAULT_SEED,
        }
    }

    pub fn with_artifact(mut self, id: &str, placement: BoundingBox, artifact: MockArtifact) -> Self {
        self.artifacts.push(ArtifactSpec {
            id: id.to_string(),
            placement,
            artifact,
        });
        self
    }

    pub fn with_tilt(mut self, yaw_deg: f64, pitch_deg: f64) -> Self {
        self.tilt = Some(Tilt { yaw_deg, pitch_deg });
        self
    }

    pub fn artifact(&self, id: &str) -> Option<&ArtifactSpec> {
        self.artifacts.iter().find(|a| a.id == id)
    }

    pub fn artifact_mut(&mut self, id: &str) -> Option<&mut ArtifactSpec> {
        self.artifacts.iter_mut().find(|a| a.id == id)
    }

    /// Returns a copy with one artifact's state replaced.
    pub fn with_state(&self, id: &str, state: StateValue) -> Result<Self> {
        let mut next = self.clone();
        next.artifact_mut(id)
            .ok_or_else(|| MockError::Spec(format!("unknown artifact '{id}'")))?
            .artifact
            .set_state(state)?;
        Ok(next)
    }

    pub fn validate(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(MockError::Spec("canvas must be non-empty".into()));
        }
        let mut ids = HashSet::new();
        for (i, a) in self.artifacts.iter().enumerate() {
            if !ids.insert(a.id.as_str()) {
                return Err(MockError::Spec(format!("duplicate artifact id '{}'", a.id)));
            }
            if a.placement.is_empty() || !a.placement.fits_within(self.width, self.height) {
                return Err(MockError::Spec(format!(
                    "artifact '{}' placement {} outside {}x{} canvas",
                    a.id, a.placement, self.width, self.height
                )));
            }
            for b in &self.artifacts[..i] {
                if a.placement.intersects(&b.placement) {
                    return Err(MockError::Spec(format!(
                        "artifacts '{}' and '{}' overlap",
                        b.id, a.id
                    )));
                }
            }
            a.artifact.validate(&a.id, a.placement)?;
        }
        if let Some(t) = &self.tilt {
            if !(t.yaw_deg.abs() <= 45.0 && t.pitch_deg.abs() <= 45.0) {
                return Err(MockError::Spec("tilt must be within 45 degrees".into()));
            }
        }
        if let Some(n) = &self.noise {
            if !(n.gaussian_sigma >= 0.0) {
                return Err(MockError::Spec("noise sigma must be non-negative".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArtifactSpec {
    pub id: String,
    pub placement: BoundingBox,
    #[serde(flatten)]
    pub artifact: MockArtifact,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tilt {
    #[serde(default)]
    pub yaw_deg: f64,
    #[serde(default)]
    pub pitch_deg: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    #[serde(default)]
    pub gaussian_sigma: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub glare: Option<Glare>,
}

/// Additive white ellipse with Gaussian falloff.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Glare {
    pub cx: f64,
    pub cy: f64,
    pub rx: f64,
    pub ry: f64,
    pub intensity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MockArtifact {
    CircularGauge {
        value: f64,
        #[serde(default)]
        style: CircularGaugeStyle,
    },
    LinearGauge {
        value: f64,
        #[serde(default)]
        style: LinearGaugeStyle,
    },
    SevenSegment {
        text: String,
        /// `(digit index, segment letter)` pairs whose lit state is inverted.
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        flips: Vec<(usize, char)>,
    },
    GlyphText {
        text: String,
        #[serde(default = "default_glyph_scale")]
        scale: usize,
    },
    Knob {
        state: String,
        #[serde(default)]
        style: KnobStyle,
    },
    Toggle {
        state: ToggleState,
    },
    SafetyLight {
        #[serde(default)]
        lit: Vec<LampColor>,
    },
    LiquidVessel {
        level: f64,
        #[serde(default)]
        style: VesselStyle,
    },
    FixtureBed {
        fixtures: Vec<FixturePose>,
    },
    Part {
        state: PartState,
    },
}

fn default_glyph_scale() -> usize {
    3
}

impl MockArtifact {
    pub fn kind_name(&self) -> &'static str {
        match self {
            MockArtifact::CircularGauge { .. } => "circular_gauge",
            MockArtifact::LinearGauge { .. } => "linear_gauge",
            MockArtifact::SevenSegment { .. } => "seven_segment",
            MockArtifact::GlyphText { .. } => "glyph_text",
            MockArtifact::Knob { .. } => "knob",
            MockArtifact::Toggle { .. } => "toggle",
            MockArtifact::SafetyLight { .. } => "safety_light",
            MockArtifact::LiquidVessel { .. } => "liquid_level",
            MockArtifact::FixtureBed { .. } => "fixture_state",
            MockArtifact::Part { .. } => "part_quality",
        }
    }

    pub fn validate(&self, id: &str, placement: BoundingBox) -> Result<()> {
        let err = |msg: String| Err(MockError::Spec(format!("artifact '{id}': {msg}")));
        match self {
            MockArtifact::CircularGauge { value, style } => {
                if !(style.min < style.max) {
                    return err("gauge range must satisfy min < max".into());
                }
                if !(style.min..=style.max).contains(value) {
                    return err(format!("value {value} outside [{}, {}]", style.min, style.max));
                }
            }
            MockArtifact::LinearGauge { value, style } => {
                if !(style.min < style.max) {
                    return err("gauge range must satisfy min < max".into());
                }
                if !(style.min..=style.max).contains(value) {
                    return err(format!("value {value} outside [{}, {}]", style.min, style.max));
                }
            }
            MockArtifact::SevenSegment { text, flips } => {
                if text.is_empty() || !text.chars().all(|c| c.is_ascii_digit()) {
                    return err(format!("seven-segment text '{text}' must be digits"));
                }
                for &(i, s) in flips {
                    if i >= text.len() || !('a'..='g').contains(&s) {
                        return err(format!("invalid segment flip ({i}, {s})"));
                    }
                }
            }
            MockArtifact::GlyphText { text, scale } => {
                if *scale == 0 {
                    return err("glyph scale must be positive".into());
                }
                if let Some(c) = text.chars().find(|&c| crate::font::glyph(c).is_none()) {
                    return err(format!("no glyph for '{c}'"));
                }
                let needed = crate::font::text_width(text, *scale);
                if needed + 4 > placement.width || 7 * scale + 4 > placement.height {
                    return err("text does not fit placement".into());
                }
            }
            MockArtifact::Knob { state, style } => {
                if !style.detents.iter().any(|d| &d.label == state) {
                    return err(format!("unknown knob state '{state}'"));
                }
            }
            MockArtifact::LiquidVessel { level, style } => {
                if !(style.min < style.max) {
                    return err("vessel range must satisfy min < max".into());
                }
                if !(style.min..=style.max).contains(level) {
                    return err(format!("level {level} outside [{}, {}]", style.min, style.max));
                }
            }
            MockArtifact::FixtureBed { fixtures } => {
                let mut seen = HashSet::new();
                for f in fixtures {
                    if !seen.insert(f.id.as_str()) {
                        return err(format!("duplicate fixture id '{}'", f.id));
                    }
                }
                if fixtures.len() > crate::artifacts::FIXTURE_SLOTS {
                    return err(format!("at most {} fixtures", crate::artifacts::FIXTURE_SLOTS));
                }
                let (min_w, min_h) = crate::artifacts::FIXTURE_BED_MIN;
                if placement.width < min_w || placement.height < min_h {
                    return err(format!("fixture bed needs at least {min_w}x{min_h} pixels"));
                }
            }
            MockArtifact::Toggle { .. } | MockArtifact::SafetyLight { .. } | MockArtifact::Part { .. } => {}
        }
        Ok(())
    }

    /// Replaces the ground-truth state, keeping the style.
    pub fn set_state(&mut self, state: StateValue) -> Result<()> {
        let mismatch = |kind: &str| MockError::Spec(format!("state does not fit a {kind}"));
        match (self, state) {
            (MockArtifact::CircularGauge { value, .. }, StateValue::Number(v))
            | (MockArtifact::LinearGauge { value, .. }, StateValue::Number(v))
            | (MockArtifact::LiquidVessel { level: value, .. }, StateValue::Number(v)) => *value = v,
            (MockArtifact::SevenSegment { text, flips }, StateValue::Text(t)) => {
                *text = t;
                flips.clear();
            }
            (MockArtifact::GlyphText { text, .. }, StateValue::Text(t)) => *text = t,
            (MockArtifact::Knob { state, .. }, StateValue::Text(t)) => *state = t,
            (MockArtifact::Toggle { state }, StateValue::Text(t)) => {
                *state = serde_json::from_value(serde_json::Value::String(t))
                    .map_err(|e| MockError::Spec(e.to_string()))?
            }
            (MockArtifact::Part { state }, StateValue::Text(t)) => {
                *state = serde_json::from_value(serde_json::Value::String(t))
                    .map_err(|e| MockError::Spec(e.to_string()))?
            }
            (MockArtifact::SafetyLight { lit }, StateValue::Text(t)) => {
                *lit = if t == "off" {
                    Vec::new()
                } else {
                    vec![serde_json::from_value(serde_json::Value::String(t))
                        .map_err(|e| MockError::Spec(e.to_string()))?]
                }
            }
            (MockArtifact::SafetyLight { lit }, StateValue::Lamps(l)) => *lit = l,
            (MockArtifact::FixtureBed { fixtures }, StateValue::Fixtures(f)) => *fixtures = f,
            (a, _) => return Err(mismatch(a.kind_name())),
        }
        Ok(())
    }
}

/// A state override, as used by sequences.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateValue {
    Number(f64),
    Text(String),
    Lamps(Vec<LampColor>),
    Fixtures(Vec<FixturePose>),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CircularGaugeStyle {
    pub min: f64,
    pub max: f64,
    /// Needle angle at `min`, degrees counter-clockwise from +x (y up).
    pub min_angle_deg: f64,
    /// Needle angle at `max`.
    pub max_angle_deg: f64,
}

impl Default for CircularGaugeStyle {
    fn default() -> Self {
        Self {
            min: 0.0,
            max: 100.0,
            min_angle_deg: 225.0,
            max_angle_deg: -45.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    #[default]
    Horizontal,
    Vertical,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LinearGaugeStyle {
    pub min: f64,
    pub max: f64,
    pub orientation: Orientation,
    /// Distance from the box edge to the scale ends along the travel axis.
    pub margin: f64,
}

impl Default for LinearGaugeStyle {
    fn default() -> Self {
        Self {
            min: 0.0,
            max: 10.0,
            orientation: Orientation::Horizontal,
            margin: 16.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Detent {
    pub label: String,
    pub angle_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnobStyle {
    pub detents: Vec<Detent>,
}

impl Default for KnobStyle {
    fn default() -> Self {
        let d = |label: &str, angle_deg| Detent {
            label: label.to_string(),
            angle_deg,
        };
        Self {
            detents: vec![d("OFF", 0.0), d("LOW", 60.0), d("MED", 120.0), d("HIGH", 180.0)],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ToggleState {
    #[serde(rename = "UP")]
    Up,
    #[serde(rename = "DOWN")]
    Down,
}

impl ToggleState {
    pub fn label(&self) -> &'static str {
        match self {
            ToggleState::Up => "UP",
            ToggleState::Down => "DOWN",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LampColor {
    Red,
    Yellow,
    Green,
}

impl LampColor {
    pub const ALL: [LampColor; 3] = [LampColor::Red, LampColor::Yellow, LampColor::Green];

    pub fn name(&self) -> &'static str {
        match self {
            LampColor::Red => "red",
            LampColor::Yellow => "yellow",
            LampColor::Green => "green",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VesselStyle {
    pub min: f64,
    pub max: f64,
}

impl Default for VesselStyle {
    fn default() -> Self {
        Self { min: 0.0, max: 100.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixturePose {
    pub id: String,
    /// Displacement from the nominal slot center, pixels.
    #[serde(default)]
    pub offset: [f64; 2],
    #[serde(default)]
    pub rotation_deg: f64,
}

impl FixturePose {
    pub fn nominal(id: &str) -> Self {
        Self {
            id: id.to_string(),
            offset: [0.0, 0.0],
            rotation_deg: 0.0,
        }
    }

    pub fn is_nominal(&self) -> bool {
        self.offset == [0.0, 0.0] && self.rotation_deg == 0.0
    }

    /// Ground-truth alignment: within [`ALIGNED_OFFSET_PX`] and [`ALIGNED_ROTATION_DEG`].
    pub fn is_aligned(&self) -> bool {
        self.offset[0].hypot(self.offset[1]) <= ALIGNED_OFFSET_PX
            && self.rotation_deg.abs() <= ALIGNED_ROTATION_DEG
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartState {
    Empty,
    Unmachined,
    Partial,
    Good,
}
