//! Ready-made panels used by demos, calibration fixtures and tests.

use panel_imaging::BoundingBox;

use crate::spec::{
    CircularGaugeStyle, FixturePose, KnobStyle, LampColor, LinearGaugeStyle, MockArtifact,
    Orientation, PanelSpec, PartState, ToggleState, VesselStyle,
};

pub const DEMO_WIDTH: usize = 640;
pub const DEMO_HEIGHT: usize = 480;

pub fn fixture_ids() -> Vec<String> {
    (1..=6).map(|i| format!("f{i}")).collect()
}

pub fn nominal_fixtures() -> Vec<FixturePose> {
    fixture_ids().iter().map(|id| FixturePose::nominal(id)).collect()
}

/// A 640x480 panel carrying one artifact of every class.
pub fn demo_panel() -> PanelSpec {
    PanelSpec::new(DEMO_WIDTH, DEMO_HEIGHT)
        .with_artifact(
            "spindle_load",
            BoundingBox::new(20, 20, 150, 150),
            MockArtifact::CircularGauge {
                value: 40.0,
                style: CircularGaugeStyle::default(),
            },
        )
        .with_artifact(
            "feed_rate",
            BoundingBox::new(190, 20, 240, 60),
            MockArtifact::LinearGauge {
                value: 6.0,
                style: LinearGaugeStyle::default(),
            },
        )
        .with_artifact(
            "part_count",
            BoundingBox::new(190, 100, 160, 70),
            MockArtifact::SevenSegment {
                text: "8421".into(),
                flips: Vec::new(),
            },
        )
        .with_artifact(
            "mode",
            BoundingBox::new(450, 20, 90, 90),
            MockArtifact::Knob {
                state: "LOW".into(),
                style: KnobStyle::default(),
            },
        )
        .with_artifact(
            "coolant_switch",
            BoundingBox::new(560, 20, 50, 90),
            MockArtifact::Toggle { state: ToggleState::Up },
        )
        .with_artifact(
            "status_light",
            BoundingBox::new(440, 130, 50, 150),
            MockArtifact::SafetyLight { lit: vec![LampColor::Green] },
        )
        .with_artifact(
            "coolant_level",
            BoundingBox::new(520, 130, 60, 200),
            MockArtifact::LiquidVessel {
                level: 40.0,
                style: VesselStyle::default(),
            },
        )
        .with_artifact(
            "program",
            BoundingBox::new(20, 190, 200, 40),
            MockArtifact::GlyphText {
                text: "RUN 42".into(),
                scale: 3,
            },
        )
        .with_artifact(
            "fixtures",
            BoundingBox::new(20, 250, 300, 160),
            MockArtifact::FixtureBed { fixtures: nominal_fixtures() },
        )
        .with_artifact(
            "part",
            BoundingBox::new(340, 300, 100, 160),
            MockArtifact::Part { state: PartState::Good },
        )
}

/// The throughput scene: one circular gauge and one safety light on 640x480.
pub fn gauge_and_light_panel() -> PanelSpec {
    PanelSpec::new(DEMO_WIDTH, DEMO_HEIGHT)
        .with_artifact(
            "gauge",
            BoundingBox::new(60, 90, 300, 300),
            MockArtifact::CircularGauge {
                value: 0.0,
                style: CircularGaugeStyle::default(),
            },
        )
        .with_artifact(
            "light",
            BoundingBox::new(460, 90, 80, 240),
            MockArtifact::SafetyLight { lit: vec![LampColor::Red] },
        )
}

/// A vertical linear gauge panel, used to exercise the second axis.
pub fn vertical_gauge_panel() -> PanelSpec {
    PanelSpec::new(200, 320).with_artifact(
        "level_bar",
        BoundingBox::new(60, 20, 70, 280),
        MockArtifact::LinearGauge {
            value: 0.0,
            style: LinearGaugeStyle {
                orientation: Orientation::Vertical,
                ..LinearGaugeStyle::default()
            },
        },
    )
}
