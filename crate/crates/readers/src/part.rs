use panel_imaging::{match_template_ssd, threshold, to_grayscale, ImageBuffer, ThresholdMode};
use serde::{Deserialize, Serialize};

use crate::encoded::EncodedImage;
use crate::error::{config, Result};
use crate::reading::Observation;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartQualityParams {
    /// A properly machined part, captured at calibration.
    pub good_template: EncodedImage,
    /// Largest normalized SSD still judged good.
    pub reject_threshold: f64,
    /// Smallest foreground fraction of the ROI that counts as a part being present.
    #[serde(default = "default_presence")]
    pub presence_threshold: f64,
    /// Gray level separating part from tray.
    #[serde(default = "default_foreground_threshold")]
    pub foreground_threshold: u8,
    /// `binary_inverted` for a dark part on a light tray.
    #[serde(default = "default_foreground_mode")]
    pub foreground_mode: ThresholdMode,
}

fn default_presence() -> f64 {
    0.05
}

fn default_foreground_threshold() -> u8 {
    150
}

fn default_foreground_mode() -> ThresholdMode {
    ThresholdMode::BinaryInverted
}

impl PartQualityParams {
    pub fn new(good_template: ImageBuffer, reject_threshold: f64) -> Self {
        Self {
            good_template: good_template.into(),
            reject_threshold,
            presence_threshold: default_presence(),
            foreground_threshold: default_foreground_threshold(),
            foreground_mode: default_foreground_mode(),
        }
    }

    pub fn problems(&self, roi_w: usize, roi_h: usize) -> Vec<String> {
        let mut out = Vec::new();
        let t = &self.good_template.0;
        if t.width() > roi_w || t.height() > roi_h {
            out.push(format!("good_template {}x{} exceeds the {roi_w}x{roi_h} ROI", t.width(), t.height()));
        }
        if !(self.reject_threshold > 0.0 && self.reject_threshold <= 1.0) {
            out.push("reject_threshold must be in (0, 1]".to_string());
        }
        if !(0.0..=1.0).contains(&self.presence_threshold) {
            out.push("presence_threshold must be in [0, 1]".to_string());
        }
        out
    }
}

/// Fraction of ROI pixels classified as part rather than tray.
pub fn foreground_fraction(roi: &ImageBuffer, params: &PartQualityParams) -> Result<f64> {
    let gray = if roi.is_gray() { roi.clone() } else { to_grayscale(roi)? };
    let bin = threshold(&gray, params.foreground_threshold, params.foreground_mode)?;
    let on = bin.data().iter().filter(|&&v| v != 0).count();
    Ok(on as f64 / bin.data().len() as f64)
}

/// `no_part` below the presence gate, else `good` or `defect` by template SSD.
pub fn read_part_quality(roi: &ImageBuffer, params: &PartQualityParams) -> Result<Observation> {
    if let Some(p) = params.problems(roi.width(), roi.height()).into_iter().next() {
        return config(p);
    }
    let presence = foreground_fraction(roi, params)?;
    if presence < params.presence_threshold {
        let confidence = 1.0 - presence / params.presence_threshold.max(f64::EPSILON);
        return Ok(Observation::new("no_part", confidence));
    }
    let (m, _) = match_template_ssd(roi, &params.good_template.0, roi.bounds())?;
    let thr = params.reject_threshold;
    Ok(if m.normalized_score <= thr {
        Observation::new("good", 1.0 - m.normalized_score / thr)
    } else {
        Observation::new("defect", (m.normalized_score - thr) / thr)
    })
}
