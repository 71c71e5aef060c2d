use panel_imaging::{match_template_ssd, ImageBuffer};
use serde::{Deserialize, Serialize};

use crate::encoded::EncodedImage;
use crate::error::{config, Result};
use crate::reading::Observation;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateTemplate {
    pub label: String,
    pub template: EncodedImage,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToggleParams {
    pub states: Vec<StateTemplate>,
}

impl ToggleParams {
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.states.len() < 2 {
            out.push("toggle needs at least two state templates".to_string());
        }
        if let Some(first) = self.states.first() {
            let (w, h, c) = (first.template.0.width(), first.template.0.height(), first.template.0.channels());
            for s in &self.states[1..] {
                let t = &s.template.0;
                if (t.width(), t.height(), t.channels()) != (w, h, c) {
                    out.push(format!(
                        "template '{}' is {}x{}x{}, expected {w}x{h}x{c} like '{}'",
                        s.label,
                        t.width(),
                        t.height(),
                        t.channels(),
                        first.label
                    ));
                }
            }
        }
        out
    }
}

/// Scores every state template over the ROI; the lowest SSD wins, ties to the
/// earlier state. Confidence is `1 - best / second` on normalized scores.
pub fn read_toggle(roi: &ImageBuffer, params: &ToggleParams) -> Result<Observation> {
    if let Some(p) = params.problems().into_iter().next() {
        return config(p);
    }
    let mut scores = Vec::with_capacity(params.states.len());
    for s in &params.states {
        let (m, _) = match_template_ssd(roi, &s.template.0, roi.bounds())?;
        scores.push(m.normalized_score);
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]).then(a.cmp(&b)));
    let (best, second) = (scores[order[0]], scores[order[1]]);
    let confidence = if second > best { 1.0 - best / second } else { 0.0 };
    Ok(Observation::new(params.states[order[0]].label.as_str(), confidence))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(up: &ImageBuffer, down: &ImageBuffer) -> ToggleParams {
        ToggleParams {
            states: vec![
                StateTemplate { label: "UP".into(), template: up.clone().into() },
                StateTemplate { label: "DOWN".into(), template: down.clone().into() },
            ],
        }
    }

    #[test]
    fn exact_template_wins_with_full_confidence() {
        let up = ImageBuffer::from_fn_gray(8, 8, |_, y| if y < 4 { 0 } else { 200 }).unwrap();
        let down = ImageBuffer::from_fn_gray(8, 8, |_, y| if y >= 4 { 0 } else { 200 }).unwrap();
        let obs = read_toggle(&up, &params(&up, &down)).unwrap();
        assert_eq!(obs.value.as_text(), Some("UP"));
        assert_eq!(obs.confidence, 1.0);
    }

    #[test]
    fn identical_templates_tie_to_first() {
        let t = ImageBuffer::filled(4, 4, 1, 50).unwrap();
        let roi = ImageBuffer::filled(4, 4, 1, 90).unwrap();
        let obs = read_toggle(&roi, &params(&t, &t)).unwrap();
        assert_eq!(obs.value.as_text(), Some("UP"));
        assert_eq!(obs.confidence, 0.0);
    }

    #[test]
    fn unequal_templates_are_rejected() {
        let a = ImageBuffer::filled(4, 4, 1, 50).unwrap();
        let b = ImageBuffer::filled(4, 5, 1, 50).unwrap();
        assert!(read_toggle(&a, &params(&a, &b)).is_err());
    }
}
