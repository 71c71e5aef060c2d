#![allow(dead_code)]

use panel_mock::PanelSpec;
use panel_station::{calibrate_mock, CalibrationOptions, FrameSourceConfig, StationConfig};

pub fn mock_source() -> FrameSourceConfig {
    FrameSourceConfig::Mock {
        path: "panel.json".into(),
        fps: 30,
        repeat: false,
    }
}

pub fn calibrated(spec: &PanelSpec) -> StationConfig {
    calibrate_mock(spec, &CalibrationOptions::new("s1", mock_source())).expect("mock panel calibrates")
}

/// One circular gauge at (20, 20, 150, 150) on a 640x480 frame.
pub const MINIMAL_CONFIG: &str = r#"{
  "schema_version": 1,
  "station_id": "s1",
  "frame_source": {"type": "directory", "path": "frames", "fps": 30},
  "frame_size": {"width": 640, "height": 480},
  "artifacts": [
    {
      "artifact_id": "g1",
      "kind": "circular_gauge",
      "calibration": {"pivot": {"x": 74.5, "y": 74.5}, "x_min": 3.9269908169872414, "x_max": -0.7853981633974483, "y_min": 0, "y_max": 100},
      "roi": {"x": 20, "y": 20, "width": 150, "height": 150},
      "units": "psi"
    }
  ]
}"#;

use panel_mock::{GroundTruth, TruthState};
use panel_readers::Reading;

/// Full-scale span of each numeric artifact in the mock scenes.
pub fn span(artifact_id: &str) -> f64 {
    match artifact_id {
        "feed_rate" | "level_bar" => 10.0,
        _ => 100.0,
    }
}

/// Mismatches between readings and the frame's ground truth; numeric
/// readings may deviate by `tolerance_pct` of their span.
pub fn mismatches(readings: &[Reading], truth: &GroundTruth, tolerance_pct: f64) -> Vec<String> {
    let mut out = Vec::new();
    for e in &truth.entries {
        let Some(r) = readings.iter().find(|r| r.artifact_id == e.artifact_id) else {
            out.push(format!("{}: no reading", e.artifact_id));
            continue;
        };
        match (&e.state, &r.value) {
            (TruthState::Number(want), Some(v)) => {
                let got = v.as_number().unwrap_or(f64::NAN);
                let err = (got - want).abs() / span(&e.artifact_id) * 100.0;
                if !(err <= tolerance_pct) {
                    out.push(format!("{}: read {got}, true {want}", e.artifact_id));
                }
            }
            (TruthState::Label(want), Some(v)) if v.as_text() == Some(want) => {}
            (TruthState::Fixtures { overall, fixtures }, Some(v)) if v.as_text() == Some(overall) => {
                for f in fixtures {
                    let id = format!("{}.{}", e.artifact_id, f.id);
                    let want = if f.aligned { "aligned" } else { "misaligned" };
                    let got = readings.iter().find(|r| r.artifact_id == id).and_then(|r| r.value.clone());
                    if got.as_ref().and_then(|v| v.as_text()) != Some(want) {
                        out.push(format!("{id}: read {got:?}, true {want}"));
                    }
                }
            }
            (want, got) => out.push(format!("{}: read {got:?}, true {want:?}", e.artifact_id)),
        }
    }
    out
}
