use panel_imaging::{match_template_ssd, BoundingBox, ImageBuffer, Point2};
use serde::{Deserialize, Serialize};

use crate::encoded::EncodedImage;
use crate::error::{config, Result};
use crate::reading::clamp_unit;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureSpec {
    pub id: String,
    /// Where the aligned fixture sits, in ROI coordinates.
    pub expected_box: BoundingBox,
    /// The aligned fixture, captured at calibration.
    pub template: EncodedImage,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureParams {
    pub fixtures: Vec<FixtureSpec>,
    /// Largest normalized SSD for an aligned fixture.
    pub misalign_threshold: f64,
    /// Search area inflation per side, as a fraction of the expected box size.
    #[serde(default = "default_margin")]
    pub search_margin: f64,
    /// Largest distance in pixels between matched and expected centers.
    #[serde(default = "default_center_tolerance")]
    pub center_tolerance: f64,
}

fn default_margin() -> f64 {
    0.25
}

fn default_center_tolerance() -> f64 {
    3.0
}

impl FixtureParams {
    pub fn problems(&self, roi_w: usize, roi_h: usize) -> Vec<String> {
        let mut out = Vec::new();
        for (i, f) in self.fixtures.iter().enumerate() {
            if f.expected_box.is_empty() || !f.expected_box.fits_within(roi_w, roi_h) {
                out.push(format!("fixtures[{i}] '{}' expected_box lies outside the ROI", f.id));
            }
            let t = &f.template.0;
            let area = self.search_area(&f.expected_box, roi_w, roi_h);
            if t.width() > area.width || t.height() > area.height {
                out.push(format!("fixtures[{i}] '{}' template is larger than its search area", f.id));
            }
            if self.fixtures[..i].iter().any(|g| g.id == f.id) {
                out.push(format!("fixtures[{i}] duplicates id '{}'", f.id));
            }
        }
        if !(self.misalign_threshold > 0.0 && self.misalign_threshold <= 1.0) {
            out.push("misalign_threshold must be in (0, 1]".to_string());
        }
        if !(self.search_margin >= 0.0) {
            out.push("search_margin must be non-negative".to_string());
        }
        out
    }

    /// Expected box inflated by `search_margin` on every side, clipped to the ROI.
    pub fn search_area(&self, expected: &BoundingBox, roi_w: usize, roi_h: usize) -> BoundingBox {
        let mx = (expected.width as f64 * self.search_margin).round() as usize;
        let my = (expected.height as f64 * self.search_margin).round() as usize;
        expected.inflate_clipped(mx, my, roi_w, roi_h)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixtureResult {
    pub id: String,
    pub aligned: bool,
    pub score: f64,
    pub center: Point2,
    pub confidence: f64,
}

impl FixtureResult {
    pub fn label(&self) -> &'static str {
        if self.aligned {
            "aligned"
        } else {
            "misaligned"
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixtureInspection {
    pub fixtures: Vec<FixtureResult>,
}

impl FixtureInspection {
    /// `ok` when every fixture is aligned (vacuously for none), else `fault`.
    pub fn overall(&self) -> &'static str {
        if self.fixtures.iter().all(|f| f.aligned) {
            "ok"
        } else {
            "fault"
        }
    }

    pub fn confidence(&self) -> f64 {
        self.fixtures.iter().map(|f| f.confidence).fold(1.0, f64::min)
    }
}

fn box_center(b: &BoundingBox) -> Point2 {
    Point2::new(
        b.x as f64 + (b.width as f64 - 1.0) / 2.0,
        b.y as f64 + (b.height as f64 - 1.0) / 2.0,
    )
}

pub fn read_fixture_state(frame: &ImageBuffer, params: &FixtureParams) -> Result<FixtureInspection> {
    if let Some(p) = params.problems(frame.width(), frame.height()).into_iter().next() {
        return config(p);
    }
    let thr = params.misalign_threshold;
    let mut fixtures = Vec::with_capacity(params.fixtures.len());
    for f in &params.fixtures {
        let t = &f.template.0;
        let area = params.search_area(&f.expected_box, frame.width(), frame.height());
        let (m, _) = match_template_ssd(frame, t, area)?;
        let center = Point2::new(
            m.top_left.x + (t.width() as f64 - 1.0) / 2.0,
            m.top_left.y + (t.height() as f64 - 1.0) / 2.0,
        );
        let offset = center.distance(box_center(&f.expected_box));
        let score_ok = m.normalized_score <= thr;
        let aligned = score_ok && offset <= params.center_tolerance;
        let confidence = if aligned {
            1.0 - m.normalized_score / thr
        } else if !score_ok {
            (m.normalized_score - thr) / thr
        } else {
            1.0
        };
        fixtures.push(FixtureResult {
            id: f.id.clone(),
            aligned,
            score: m.normalized_score,
            center,
            confidence: clamp_unit(confidence),
        });
    }
    Ok(FixtureInspection { fixtures })
}
