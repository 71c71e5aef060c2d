//! One reader per artifact class. Each consumes a perspective-corrected
//! region of interest and its calibration, and returns an [`Observation`]
//! (or a typed not-found error). Readers are pure functions.

mod config;
mod encoded;
mod error;
pub mod fixture;
pub mod glyph;
pub mod light;
pub mod liquid;
pub mod needle;
pub mod part;
mod reading;
pub mod scale;
pub mod segments;
pub mod toggle;

pub use config::{Outcome, ReaderConfig};
pub use encoded::EncodedImage;
pub use error::{ReadError, Result};
pub use fixture::{read_fixture_state, FixtureInspection, FixtureParams, FixtureResult, FixtureSpec};
pub use glyph::{read_glyph_text, GlyphTemplate, GlyphTextParams};
pub use light::{read_safety_light, LampColor, LampZone, SafetyLightParams};
pub use liquid::{read_liquid_level, LiquidLevelParams};
pub use needle::{
    detect_needle, read_circular_gauge, read_knob, read_linear_gauge, CircularGaugeParams,
    HoughParams, KnobDetent, KnobParams, LinearGaugeParams, NeedleEstimate, NeedleParams,
    Preprocess,
};
pub use part::{read_part_quality, PartQualityParams};
pub use reading::{Observation, Reading, ReadingKind, ReadingValue};
pub use scale::{map_needle_to_scale, Axis, GaugeCalibration};
pub use segments::{classify_segment_states, read_seven_segment, SegmentTemplate, SevenSegmentParams};
pub use toggle::{read_toggle, StateTemplate, ToggleParams};
