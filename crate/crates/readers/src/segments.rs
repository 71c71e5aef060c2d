//! Seven-segment displays.

use panel_imaging::{crop_roi, threshold, to_grayscale, BoundingBox, ImageBuffer, ThresholdMode};
use serde::{Deserialize, Serialize};

use crate::error::{config, Result};
use crate::reading::Observation;

pub const SEGMENT_NAMES: [char; 7] = ['a', 'b', 'c', 'd', 'e', 'f', 'g'];

/// Fractional rectangle `[x0, x1) x [y0, y1)` of a digit cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Zone {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Zone {
    pub const fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        Self { x0, y0, x1, y1 }
    }

    fn is_valid(&self) -> bool {
        0.0 <= self.x0 && self.x0 < self.x1 && self.x1 <= 1.0 && 0.0 <= self.y0 && self.y0 < self.y1 && self.y1 <= 1.0
    }
}

/// A set of lit segments, `a..g` as bits 0..6.
pub type SegmentSet = u8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentTemplate {
    /// Zones for segments `a..g`.
    pub zones: [Zone; 7],
    /// Fraction of foreground pixels in a zone at and above which the segment is lit.
    pub lit_fraction: f64,
    /// Lit set for each digit `0..9`.
    pub digits: [SegmentSet; 10],
}

pub const CANONICAL_DIGITS: [SegmentSet; 10] = [
    0b0111111, 0b0000110, 0b1011011, 0b1001111, 0b1100110, 0b1101101, 0b1111101, 0b0000111,
    0b1111111, 0b1101111,
];

impl Default for SegmentTemplate {
    /// Zones sit in the middle of each stroke of a cell about 4:7 wide:tall.
    fn default() -> Self {
        Self {
            zones: [
                Zone::new(0.36, 0.12, 0.64, 0.17),
                Zone::new(0.72, 0.24, 0.82, 0.41),
                Zone::new(0.72, 0.59, 0.82, 0.76),
                Zone::new(0.36, 0.83, 0.64, 0.88),
                Zone::new(0.18, 0.59, 0.28, 0.76),
                Zone::new(0.18, 0.24, 0.28, 0.41),
                Zone::new(0.36, 0.475, 0.64, 0.525),
            ],
            lit_fraction: 0.5,
            digits: CANONICAL_DIGITS,
        }
    }
}

impl SegmentTemplate {
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (i, z) in self.zones.iter().enumerate() {
            if !z.is_valid() {
                out.push(format!("zone {} must lie within the unit cell", SEGMENT_NAMES[i]));
            }
        }
        if !(self.lit_fraction > 0.0 && self.lit_fraction < 1.0) {
            out.push("lit_fraction must be in (0, 1)".to_string());
        }
        for i in 0..10 {
            for j in 0..i {
                if self.digits[i] == self.digits[j] {
                    out.push(format!("digits {j} and {i} share a segment set"));
                }
            }
        }
        out
    }

    pub fn decode(&self, set: SegmentSet) -> Option<char> {
        self.digits
            .iter()
            .position(|&d| d == set)
            .map(|d| (b'0' + d as u8) as char)
    }
}

/// Pixel range covered by the fractional interval `[f0, f1)` of `len` pixels,
/// never empty.
fn pixel_span(f0: f64, f1: f64, len: usize) -> (usize, usize) {
    let a = ((f0 * len as f64).round() as usize).min(len - 1);
    let b = ((f1 * len as f64).round() as usize).clamp(a + 1, len);
    (a, b)
}

/// Lit segments of one binarized digit cell.
pub fn classify_segment_states(cell: &ImageBuffer, tmpl: &SegmentTemplate) -> SegmentSet {
    let (w, h) = (cell.width(), cell.height());
    let mut set = 0;
    for (s, z) in tmpl.zones.iter().enumerate() {
        let (x0, x1) = pixel_span(z.x0, z.x1, w);
        let (y0, y1) = pixel_span(z.y0, z.y1, h);
        let mut on = 0usize;
        for y in y0..y1 {
            for x in x0..x1 {
                if cell.get(x, y, 0) != 0 {
                    on += 1;
                }
            }
        }
        let total = (x1 - x0) * (y1 - y0);
        if on as f64 >= tmpl.lit_fraction * total as f64 {
            set |= 1 << s;
        }
    }
    set
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SevenSegmentParams {
    pub digit_count: usize,
    #[serde(default)]
    pub template: SegmentTemplate,
    /// Gray level above which a pixel is lit.
    #[serde(default = "default_lit_threshold")]
    pub threshold: u8,
}

fn default_lit_threshold() -> u8 {
    75
}

impl SevenSegmentParams {
    pub fn new(digit_count: usize) -> Self {
        Self {
            digit_count,
            template: SegmentTemplate::default(),
            threshold: default_lit_threshold(),
        }
    }

    pub fn problems(&self) -> Vec<String> {
        let mut out = self.template.problems();
        if self.digit_count == 0 {
            out.push("digit_count must be at least 1".to_string());
        }
        out
    }
}

/// Equal-width digit cells across `width`.
pub fn digit_cells(width: usize, height: usize, n: usize) -> Vec<BoundingBox> {
    (0..n)
        .map(|i| {
            let x0 = (i as f64 * width as f64 / n as f64).round() as usize;
            let x1 = ((i + 1) as f64 * width as f64 / n as f64).round() as usize;
            BoundingBox::new(x0, 0, (x1 - x0).max(1), height)
        })
        .collect()
}

pub fn read_seven_segment(roi: &ImageBuffer, params: &SevenSegmentParams) -> Result<Observation> {
    if params.digit_count == 0 {
        return config("digit_count must be at least 1");
    }
    if roi.width() < params.digit_count {
        return config("ROI narrower than one pixel per digit");
    }
    let gray = if roi.is_gray() { roi.clone() } else { to_grayscale(roi)? };
    let bin = threshold(&gray, params.threshold, ThresholdMode::Binary)?;
    let mut text = String::with_capacity(params.digit_count);
    let mut recognized = 0;
    for cell in digit_cells(bin.width(), bin.height(), params.digit_count) {
        let set = classify_segment_states(&crop_roi(&bin, cell)?, &params.template);
        match params.template.decode(set) {
            Some(c) => {
                text.push(c);
                recognized += 1;
            }
            None => text.push('?'),
        }
    }
    Ok(Observation::new(
        text,
        recognized as f64 / params.digit_count as f64,
    ))
}
