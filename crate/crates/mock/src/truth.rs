use chrono::{DateTime, Utc};
use panel_imaging::{Homography, Point2};
use serde::{Deserialize, Serialize};

use crate::spec::{ArtifactSpec, LampColor, MockArtifact, PartState};

/// True state of one artifact, in the vocabulary its reader reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TruthState {
    Number(f64),
    Label(String),
    Fixtures {
        overall: String,
        fixtures: Vec<FixtureTruth>,
    },
}

impl TruthState {
    pub fn as_number(&self) -> Option<f64> {
        match self {
            TruthState::Number(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_label(&self) -> Option<&str> {
        match self {
            TruthState::Label(s) => Some(s),
            TruthState::Fixtures { overall, .. } => Some(overall),
            TruthState::Number(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureTruth {
    pub id: String,
    pub aligned: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthEntry {
    pub artifact_id: String,
    pub kind: String,
    pub state: TruthState,
}

/// Oracle record for one rendered frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub timestamp: DateTime<Utc>,
    pub entries: Vec<TruthEntry>,
    /// Canvas-to-frame map of the simulated camera tilt, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tilt_homography: Option<Homography>,
    /// Where the canvas corners land in the frame, clockwise from top-left.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub panel_corners: Option<[Point2; 4]>,
}

impl GroundTruth {
    pub fn get(&self, artifact_id: &str) -> Option<&TruthState> {
        self.entries
            .iter()
            .find(|e| e.artifact_id == artifact_id)
            .map(|e| &e.state)
    }

    /// Frame-to-canvas map that undoes the tilt.
    pub fn calibration_homography(&self) -> Option<Homography> {
        self.tilt_homography.as_ref().and_then(|h| h.inverse().ok())
    }
}

pub fn part_label(state: PartState) -> &'static str {
    match state {
        PartState::Empty => "no_part",
        PartState::Good => "good",
        PartState::Unmachined | PartState::Partial => "defect",
    }
}

pub fn light_label(lit: &[LampColor]) -> &'static str {
    let mut distinct: Vec<LampColor> = lit.to_vec();
    distinct.sort_by_key(|c| c.name());
    distinct.dedup();
    match distinct.as_slice() {
        [] => "off",
        [one] => one.name(),
        _ => "multiple",
    }
}

pub(crate) fn truth_entry(a: &ArtifactSpec) -> TruthEntry {
    let state = match &a.artifact {
        MockArtifact::CircularGauge { value, .. }
        | MockArtifact::LinearGauge { value, .. }
        | MockArtifact::LiquidVessel { level: value, .. } => TruthState::Number(*value),
        MockArtifact::SevenSegment { text, flips } => {
            let mut chars: Vec<char> = text.chars().collect();
            for &(i, _) in flips {
                // A flipped segment may or may not land on another digit's set.
                chars[i] = crate::artifacts::flipped_digit(chars[i], flips, i);
            }
            TruthState::Label(chars.into_iter().collect())
        }
        MockArtifact::GlyphText { text, .. } => TruthState::Label(text.trim().to_string()),
        MockArtifact::Knob { state, .. } => TruthState::Label(state.clone()),
        MockArtifact::Toggle { state } => TruthState::Label(state.label().to_string()),
        MockArtifact::SafetyLight { lit } => TruthState::Label(light_label(lit).to_string()),
        MockArtifact::Part { state } => TruthState::Label(part_label(*state).to_string()),
        MockArtifact::FixtureBed { fixtures } => {
            let fixtures: Vec<FixtureTruth> = fixtures
                .iter()
                .map(|f| FixtureTruth {
                    id: f.id.clone(),
                    aligned: f.is_aligned(),
                })
                .collect();
            let overall = if fixtures.iter().all(|f| f.aligned) { "ok" } else { "fault" };
            TruthState::Fixtures {
                overall: overall.to_string(),
                fixtures,
            }
        }
    };
    TruthEntry {
        artifact_id: a.id.clone(),
        kind: a.artifact.kind_name().to_string(),
        state,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn light_labels() {
        assert_eq!(light_label(&[]), "off");
        assert_eq!(light_label(&[LampColor::Green]), "green");
        assert_eq!(light_label(&[LampColor::Red, LampColor::Red]), "red");
        assert_eq!(light_label(&[LampColor::Red, LampColor::Green]), "multiple");
    }
}
