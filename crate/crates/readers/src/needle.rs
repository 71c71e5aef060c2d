//! Needle-style indicators: circular gauges, linear gauges and knobs.
//!
//! All three share one segmentation: gray, blur, threshold, Hough lines.

use std::f64::consts::PI;

use panel_imaging::{
    gaussian_blur, hough_lines, threshold, to_grayscale, ImageBuffer, Point2, PolarLine,
    ThresholdMode,
};
use serde::{Deserialize, Serialize};

use crate::error::{config, ReadError, Result};
use crate::reading::{clamp_unit, Observation};
use crate::scale::{angular_distance, map_needle_to_scale, unwrap_angle, Axis, GaugeCalibration};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Preprocess {
    /// Odd Gaussian kernel size; 1 disables blurring.
    pub blur_kernel: usize,
    pub blur_sigma: f64,
    pub threshold: u8,
    pub mode: ThresholdMode,
}

impl Default for Preprocess {
    fn default() -> Self {
        Self {
            blur_kernel: 5,
            blur_sigma: 1.0,
            threshold: 100,
            mode: ThresholdMode::BinaryInverted,
        }
    }
}

impl Preprocess {
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.blur_kernel == 0 || self.blur_kernel % 2 == 0 {
            out.push(format!("blur_kernel must be odd, got {}", self.blur_kernel));
        }
        if !(self.blur_sigma > 0.0) {
            out.push("blur_sigma must be positive".to_string());
        }
        out
    }

    /// Single-channel binary image with the indicator as foreground.
    pub fn binarize(&self, roi: &ImageBuffer) -> Result<ImageBuffer> {
        let gray = if roi.is_gray() { roi.clone() } else { to_grayscale(roi)? };
        let smooth = if self.blur_kernel > 1 {
            gaussian_blur(&gray, self.blur_kernel, self.blur_sigma)?
        } else {
            gray
        };
        Ok(threshold(&smooth, self.threshold, self.mode)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HoughParams {
    pub rho_res: f64,
    pub theta_res_deg: f64,
    pub vote_threshold: u32,
}

impl Default for HoughParams {
    fn default() -> Self {
        Self {
            rho_res: 1.0,
            theta_res_deg: 1.0,
            vote_threshold: 15,
        }
    }
}

impl HoughParams {
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.rho_res > 0.0) {
            out.push("rho_res must be positive".to_string());
        }
        if !(self.theta_res_deg > 0.0 && self.theta_res_deg <= 5.0) {
            out.push("theta_res_deg must be in (0, 5]".to_string());
        }
        out
    }

    fn lines(&self, bin: &ImageBuffer) -> Result<Vec<PolarLine>> {
        Ok(hough_lines(
            bin,
            self.rho_res,
            self.theta_res_deg.to_radians(),
            self.vote_threshold,
        )?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeedleParams {
    #[serde(default)]
    pub preprocess: Preprocess,
    #[serde(default)]
    pub hough: HoughParams,
    /// Largest distance from the pivot at which a detected line still counts as the needle.
    #[serde(default = "default_pivot_radius")]
    pub pivot_radius: f64,
}

fn default_pivot_radius() -> f64 {
    6.0
}

impl Default for NeedleParams {
    fn default() -> Self {
        Self {
            preprocess: Preprocess::default(),
            hough: HoughParams::default(),
            pivot_radius: default_pivot_radius(),
        }
    }
}

impl NeedleParams {
    pub fn problems(&self) -> Vec<String> {
        let mut out = self.preprocess.problems();
        out.extend(self.hough.problems());
        if !(self.pivot_radius > 0.0) {
            out.push("pivot_radius must be positive".to_string());
        }
        out
    }
}

/// Half-width of the strip around a detected line whose pixels belong to it.
const BAND: f64 = 2.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeedleEstimate {
    /// Direction from the pivot toward the needle tip, radians counter-clockwise with y up.
    pub angle: f64,
    pub line: PolarLine,
    /// Distance from the pivot to the farthest needle pixel.
    pub length: f64,
    /// Hough votes divided by needle length, clamped to `[0, 1]`.
    pub confidence: f64,
}

fn foreground(bin: &ImageBuffer) -> impl Iterator<Item = Point2> + '_ {
    let w = bin.width();
    bin.data()
        .iter()
        .enumerate()
        .filter(|(_, &v)| v != 0)
        .map(move |(i, _)| Point2::new((i % w) as f64, (i / w) as f64))
}

/// Principal direction of a point set (unit vector, sign arbitrary).
fn principal_direction(points: &[Point2]) -> Option<Point2> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.x).sum::<f64>() / n;
    let my = points.iter().map(|p| p.y).sum::<f64>() / n;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for p in points {
        let (dx, dy) = (p.x - mx, p.y - my);
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    let phi = 0.5 * (2.0 * sxy).atan2(sxx - syy);
    Some(Point2::new(phi.cos(), phi.sin()))
}

/// Finds the needle as the strongest Hough line passing within
/// `pivot_radius` of `pivot`, resolved to the half-line with more foreground.
pub fn detect_needle(roi: &ImageBuffer, pivot: Point2, params: &NeedleParams) -> Result<NeedleEstimate> {
    let bin = params.preprocess.binarize(roi)?;
    let not_found = ReadError::NeedleNotFound {
        pivot_radius: params.pivot_radius,
    };
    let line = params
        .hough
        .lines(&bin)?
        .into_iter()
        .find(|l| l.distance_to(pivot.x, pivot.y) <= params.pivot_radius)
        .ok_or(not_found)?;

    // Unit vector along the line, in image coordinates.
    let along = Point2::new(-line.theta.sin(), line.theta.cos());
    let (mut pos, mut neg) = (Vec::new(), Vec::new());
    for p in foreground(&bin) {
        if line.distance_to(p.x, p.y) > BAND {
            continue;
        }
        let proj = (p.x - pivot.x) * along.x + (p.y - pivot.y) * along.y;
        if proj > params.pivot_radius {
            pos.push((p, proj));
        } else if proj < -params.pivot_radius {
            neg.push((p, -proj));
        }
    }
    let (side, sign) = if pos.len() >= neg.len() { (pos, 1.0) } else { (neg, -1.0) };
    if side.is_empty() {
        return Err(ReadError::NeedleNotFound {
            pivot_radius: params.pivot_radius,
        });
    }
    let outward = Point2::new(sign * along.x, sign * along.y);
    let points: Vec<Point2> = side.iter().map(|(p, _)| *p).collect();
    let mut dir = principal_direction(&points).unwrap_or(outward);
    if dir.x * outward.x + dir.y * outward.y < 0.0 {
        dir = Point2::new(-dir.x, -dir.y);
    }
    let length = side.iter().map(|(_, d)| *d).fold(0.0, f64::max);
    Ok(NeedleEstimate {
        angle: (-dir.y).atan2(dir.x),
        line,
        length,
        confidence: clamp_unit(line.votes as f64 / length.max(1.0)),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircularGaugeParams {
    pub calibration: GaugeCalibration,
    #[serde(default)]
    pub needle: NeedleParams,
}

impl CircularGaugeParams {
    pub fn problems(&self) -> Vec<String> {
        let mut out = self.calibration.problems(true);
        out.extend(self.needle.problems());
        out
    }
}

pub fn read_circular_gauge(roi: &ImageBuffer, params: &CircularGaugeParams) -> Result<Observation> {
    let Some(pivot) = params.calibration.pivot else {
        return config("circular gauge calibration has no pivot");
    };
    let needle = detect_needle(roi, pivot, &params.needle)?;
    let x = unwrap_angle(needle.angle, &params.calibration);
    Ok(Observation::new(
        map_needle_to_scale(x, &params.calibration),
        needle.confidence,
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearGaugeParams {
    pub calibration: GaugeCalibration,
    #[serde(default)]
    pub needle: NeedleParams,
    /// Largest deviation of the needle from perpendicular to the axis.
    #[serde(default = "default_max_skew")]
    pub max_skew_deg: f64,
    /// Row (horizontal axis) or column (vertical axis) of the axis midline;
    /// defaults to the ROI center.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis_position: Option<f64>,
}

fn default_max_skew() -> f64 {
    15.0
}

impl LinearGaugeParams {
    pub fn problems(&self) -> Vec<String> {
        let mut out = self.calibration.problems(false);
        out.extend(self.needle.preprocess.problems());
        out.extend(self.needle.hough.problems());
        if !(0.0..90.0).contains(&self.max_skew_deg) {
            out.push("max_skew_deg must be in [0, 90)".to_string());
        }
        out
    }
}

/// Needle position along the gauge axis, in ROI pixel coordinates.
pub fn detect_linear_needle(roi: &ImageBuffer, params: &LinearGaugeParams) -> Result<(f64, f64)> {
    let Some(axis) = params.calibration.axis else {
        return config("linear gauge calibration has no axis");
    };
    let bin = params.needle.preprocess.binarize(roi)?;
    let skew = params.max_skew_deg.to_radians();
    let perpendicular = |theta: f64| match axis {
        // Horizontal travel: the needle is vertical, its normal is near 0 or pi.
        Axis::Horizontal => theta.min(PI - theta) <= skew,
        Axis::Vertical => (theta - PI / 2.0).abs() <= skew,
    };
    let not_found = ReadError::NeedleNotFound {
        pivot_radius: params.needle.pivot_radius,
    };
    let line = params
        .needle
        .hough
        .lines(&bin)?
        .into_iter()
        .find(|l| perpendicular(l.theta))
        .ok_or(not_found)?;
    let band: Vec<Point2> = foreground(&bin)
        .filter(|p| line.distance_to(p.x, p.y) <= BAND)
        .collect();
    let n = band.len() as f64;
    let cx = band.iter().map(|p| p.x).sum::<f64>() / n;
    let cy = band.iter().map(|p| p.y).sum::<f64>() / n;
    let (s, c) = line.theta.sin_cos();
    // Line through the band centroid with the detected normal.
    let rho = cx * c + cy * s;
    let along = Point2::new(-s, c);
    let proj = |p: &Point2| p.x * along.x + p.y * along.y;
    let lo = band.iter().map(proj).fold(f64::MAX, f64::min);
    let hi = band.iter().map(proj).fold(f64::MIN, f64::max);
    let confidence = clamp_unit(line.votes as f64 / (hi - lo + 1.0));
    let position = match axis {
        Axis::Horizontal => {
            let y = params.axis_position.unwrap_or((roi.height() as f64 - 1.0) / 2.0);
            (rho - y * s) / c
        }
        Axis::Vertical => {
            let x = params.axis_position.unwrap_or((roi.width() as f64 - 1.0) / 2.0);
            (rho - x * c) / s
        }
    };
    Ok((position, confidence))
}

pub fn read_linear_gauge(roi: &ImageBuffer, params: &LinearGaugeParams) -> Result<Observation> {
    let (x, confidence) = detect_linear_needle(roi, params)?;
    Ok(Observation::new(
        map_needle_to_scale(x, &params.calibration),
        confidence,
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnobDetent {
    pub label: String,
    /// Pointer direction, degrees counter-clockwise from +x with y up.
    pub angle_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnobParams {
    pub pivot: Point2,
    pub detents: Vec<KnobDetent>,
    #[serde(default)]
    pub needle: NeedleParams,
}

impl KnobParams {
    pub fn problems(&self) -> Vec<String> {
        let mut out = self.needle.problems();
        if self.detents.is_empty() {
            out.push("knob needs at least one detent".to_string());
        }
        for (i, a) in self.detents.iter().enumerate() {
            for b in &self.detents[..i] {
                if angular_distance(a.angle_deg.to_radians(), b.angle_deg.to_radians()) < 1e-9 {
                    out.push(format!("detents '{}' and '{}' share an angle", b.label, a.label));
                }
            }
        }
        out
    }
}

/// Nearest detent to `angle` (ties to the earlier detent) and its confidence.
pub fn nearest_detent(angle: f64, detents: &[KnobDetent]) -> Option<(&KnobDetent, f64)> {
    let mut best: Option<(&KnobDetent, f64)> = None;
    for d in detents {
        let dist = angular_distance(angle, d.angle_deg.to_radians());
        if best.is_none_or(|(_, b)| dist < b) {
            best = Some((d, dist));
        }
    }
    let (detent, dist) = best?;
    let mut min_gap = f64::INFINITY;
    for (i, a) in detents.iter().enumerate() {
        for b in &detents[..i] {
            min_gap = min_gap.min(angular_distance(a.angle_deg.to_radians(), b.angle_deg.to_radians()));
        }
    }
    let confidence = if min_gap.is_finite() {
        clamp_unit(1.0 - dist / (min_gap / 2.0))
    } else {
        1.0
    };
    Some((detent, confidence))
}

pub fn read_knob(roi: &ImageBuffer, params: &KnobParams) -> Result<Observation> {
    if params.detents.is_empty() {
        return config("knob needs at least one detent");
    }
    let needle = detect_needle(roi, params.pivot, &params.needle)?;
    let (detent, confidence) =
        nearest_detent(needle.angle, &params.detents).expect("detents are non-empty");
    Ok(Observation::new(detent.label.as_str(), confidence))
}
