//! Deterministic mock-panel renderer.
//!
//! Every artifact class is drawn from analytic geometry at a declared state,
//! so each frame comes with an exact ground-truth record. Rendering is a pure
//! function of the spec, the timestamp and the spec's seed.

pub mod artifacts;
mod error;
pub mod font;
pub mod raster;
mod render;
pub mod scenes;
mod sequence;
mod spec;
mod truth;

pub use artifacts::{
    render_circular_gauge, render_fixture_bed, render_knob, render_linear_gauge,
    render_liquid_vessel, render_part, render_safety_light, render_seven_segment, render_toggle,
};
pub use error::{MockError, Result};
pub use render::{render_panel, tilt_homography};
pub use sequence::{
    frame_timestamp, render_sequence, sequence_epoch, Frame, FrameDelta, SequenceFrames,
    SequenceSpec,
};
pub use spec::{
    ArtifactSpec, CircularGaugeStyle, Detent, FixturePose, Glare, KnobStyle, LampColor,
    LinearGaugeStyle, MockArtifact, NoiseSpec, Orientation, PanelSpec, PartState, StateValue,
    Tilt, ToggleState, VesselStyle, ALIGNED_OFFSET_PX, ALIGNED_ROTATION_DEG, DEFAULT_SEED,
};
pub use truth::{light_label, part_label, FixtureTruth, GroundTruth, TruthEntry, TruthState};
