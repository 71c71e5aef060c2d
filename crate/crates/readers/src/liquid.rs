use panel_imaging::{match_template_ssd, BoundingBox, ImageBuffer};
use serde::{Deserialize, Serialize};

use crate::encoded::EncodedImage;
use crate::error::{config, ReadError, Result};
use crate::reading::Observation;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiquidLevelParams {
    /// Strip straddling the liquid surface, captured at calibration.
    pub surface_template: EncodedImage,
    /// Template top row (ROI coordinates) when the level reads `min_level`.
    pub zero_reference: f64,
    /// Level at the zero reference row, the bottom of the scale.
    #[serde(default)]
    pub min_level: f64,
    /// Artifact units per pixel of surface rise.
    pub scale: f64,
    /// Region the template slides through; spans the vessel height.
    pub search_column: BoundingBox,
    /// Largest normalized SSD accepted as a surface.
    #[serde(default = "default_reject")]
    pub reject_threshold: f64,
}

fn default_reject() -> f64 {
    0.08
}

impl LiquidLevelParams {
    pub fn problems(&self, roi_w: usize, roi_h: usize) -> Vec<String> {
        let mut out = Vec::new();
        let t = &self.surface_template.0;
        if self.search_column.is_empty() || !self.search_column.fits_within(roi_w, roi_h) {
            out.push(format!("search_column {} lies outside the {roi_w}x{roi_h} ROI", self.search_column));
        }
        if t.width() > self.search_column.width || t.height() > self.search_column.height {
            out.push("surface_template is larger than search_column".to_string());
        }
        if !(self.scale.is_finite() && self.scale != 0.0) {
            out.push("scale must be finite and non-zero".to_string());
        }
        if !(self.reject_threshold > 0.0 && self.reject_threshold <= 1.0) {
            out.push("reject_threshold must be in (0, 1]".to_string());
        }
        out
    }
}

/// Locates the surface by SSD within the search column and converts its row to a level.
pub fn read_liquid_level(roi: &ImageBuffer, params: &LiquidLevelParams) -> Result<Observation> {
    if let Some(p) = params.problems(roi.width(), roi.height()).into_iter().next() {
        return config(p);
    }
    let (m, _) = match_template_ssd(roi, &params.surface_template.0, params.search_column)?;
    if m.normalized_score > params.reject_threshold {
        return Err(ReadError::SurfaceNotFound {
            score: m.normalized_score,
            threshold: params.reject_threshold,
        });
    }
    let level = params.min_level + (params.zero_reference - m.top_left.y) * params.scale;
    Ok(Observation::new(level, 1.0 - m.normalized_score))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vessel(surface: usize) -> ImageBuffer {
        ImageBuffer::from_fn_gray(12, 100, |_, y| if y >= surface { 60 } else { 220 }).unwrap()
    }

    fn params() -> LiquidLevelParams {
        let strip = panel_imaging::crop_roi(&vessel(80), BoundingBox::new(2, 72, 8, 16)).unwrap();
        LiquidLevelParams {
            surface_template: strip.into(),
            zero_reference: 72.0,
            min_level: 0.0,
            scale: 0.5,
            search_column: BoundingBox::new(2, 0, 8, 100),
            reject_threshold: 0.08,
        }
    }

    #[test]
    fn surface_at_zero_reference_reads_zero() {
        let obs = read_liquid_level(&vessel(80), &params()).unwrap();
        assert_eq!(obs.value.as_number(), Some(0.0));
        assert_eq!(obs.confidence, 1.0);
    }

    #[test]
    fn level_rises_with_surface() {
        let obs = read_liquid_level(&vessel(40), &params()).unwrap();
        assert_eq!(obs.value.as_number(), Some(20.0));
    }

    #[test]
    fn noise_column_is_rejected() {
        let noise = ImageBuffer::from_fn_gray(12, 100, |x, y| ((x * 97 + y * 57) % 7 * 40) as u8).unwrap();
        let err = read_liquid_level(&noise, &params()).unwrap_err();
        assert!(err.is_not_found());
    }
}
