use panel_imaging::{BoundingBox, ImageBuffer};
use serde::{Deserialize, Serialize};

use crate::error::{config, Result};
use crate::reading::Observation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LampColor {
    Red,
    Yellow,
    Green,
}

impl LampColor {
    pub fn name(&self) -> &'static str {
        match self {
            LampColor::Red => "red",
            LampColor::Yellow => "yellow",
            LampColor::Green => "green",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LampZone {
    pub color: LampColor,
    pub zone: BoundingBox,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SafetyLightParams {
    pub zones: Vec<LampZone>,
    /// Mean brightness (per-pixel maximum channel) at and above which a lamp may be lit.
    #[serde(default = "default_lit_threshold")]
    pub lit_threshold: f64,
    /// Factor by which a lamp's own channel(s) must exceed the others.
    #[serde(default = "default_dominance")]
    pub dominance: f64,
    /// Largest `|R - G| / max(R, G)` for yellow.
    #[serde(default = "default_yellow_balance")]
    pub yellow_balance: f64,
}

fn default_lit_threshold() -> f64 {
    120.0
}

fn default_dominance() -> f64 {
    1.2
}

fn default_yellow_balance() -> f64 {
    0.25
}

impl SafetyLightParams {
    pub fn new(zones: Vec<LampZone>) -> Self {
        Self {
            zones,
            lit_threshold: default_lit_threshold(),
            dominance: default_dominance(),
            yellow_balance: default_yellow_balance(),
        }
    }

    pub fn problems(&self, roi_w: usize, roi_h: usize) -> Vec<String> {
        let mut out = Vec::new();
        for (i, z) in self.zones.iter().enumerate() {
            if z.zone.is_empty() || !z.zone.fits_within(roi_w, roi_h) {
                out.push(format!("zones[{i}] {} lies outside the {roi_w}x{roi_h} ROI", z.zone));
            }
        }
        if !(0.0..=255.0).contains(&self.lit_threshold) {
            out.push("lit_threshold must be in [0, 255]".to_string());
        }
        if !(self.dominance >= 1.0) {
            out.push("dominance must be at least 1".to_string());
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZoneStats {
    /// Mean of each channel.
    pub mean_rgb: [f64; 3],
    /// Mean of the per-pixel maximum channel.
    pub brightness: f64,
}

pub fn zone_stats(roi: &ImageBuffer, zone: BoundingBox) -> ZoneStats {
    let mut sum = [0u64; 3];
    let mut bright = 0u64;
    for y in zone.y..zone.bottom() {
        for x in zone.x..zone.right() {
            let p = roi.pixel(x, y);
            for c in 0..3 {
                sum[c] += p[c] as u64;
            }
            bright += *p.iter().max().unwrap() as u64;
        }
    }
    let n = zone.area() as f64;
    ZoneStats {
        mean_rgb: sum.map(|s| s as f64 / n),
        brightness: bright as f64 / n,
    }
}

/// Whether a zone with these statistics shows a lit lamp of `color`.
pub fn is_lit(stats: &ZoneStats, color: LampColor, params: &SafetyLightParams) -> bool {
    if stats.brightness < params.lit_threshold {
        return false;
    }
    let [r, g, b] = stats.mean_rgb;
    let k = params.dominance;
    match color {
        LampColor::Red => r > k * g && r > k * b,
        LampColor::Green => g > k * r && g > k * b,
        LampColor::Yellow => r > k * b && g > k * b && (r - g).abs() < params.yellow_balance * r.max(g),
    }
}

/// `red`, `yellow`, `green`, `off` (nothing lit) or `multiple`.
pub fn read_safety_light(roi: &ImageBuffer, params: &SafetyLightParams) -> Result<Observation> {
    if roi.channels() != 3 {
        return config("safety light needs a 3-channel ROI");
    }
    if let Some(p) = params.problems(roi.width(), roi.height()).into_iter().next() {
        return config(p);
    }
    let mut lit = Vec::new();
    let mut margin = 1.0f64;
    for z in &params.zones {
        let stats = zone_stats(roi, z.zone);
        let on = is_lit(&stats, z.color, params);
        if on {
            lit.push(z.color);
        }
        let m = (stats.brightness - params.lit_threshold).abs() / params.lit_threshold.max(1.0);
        margin = margin.min(m);
    }
    lit.sort();
    lit.dedup();
    let label = match lit.as_slice() {
        [] => "off",
        [one] => one.name(),
        _ => "multiple",
    };
    Ok(Observation::new(label, margin))
}
