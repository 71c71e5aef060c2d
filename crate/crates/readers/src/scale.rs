use std::f64::consts::{PI, TAU};

use panel_imaging::Point2;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    Horizontal,
    Vertical,
}

/// Two-point scale calibration of a needle indicator.
///
/// `x_min`/`x_max` are needle readings at the scale ends: radians
/// (counter-clockwise, y up) for circular gauges, pixel coordinates along
/// `axis` for linear ones.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaugeCalibration {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pivot: Option<Point2>,
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis: Option<Axis>,
    /// `+1` when the scale runs from `x_min` to `x_max`, `-1` when reversed.
    #[serde(default = "default_direction")]
    pub direction: i8,
}

fn default_direction() -> i8 {
    1
}

impl GaugeCalibration {
    pub fn circular(pivot: Point2, x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Self {
        Self {
            pivot: Some(pivot),
            x_min,
            x_max,
            y_min,
            y_max,
            axis: None,
            direction: 1,
        }
    }

    pub fn linear(axis: Axis, x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Self {
        Self {
            pivot: None,
            x_min,
            x_max,
            y_min,
            y_max,
            axis: Some(axis),
            direction: 1,
        }
    }

    /// Problems with this calibration, empty when valid.
    pub fn problems(&self, circular: bool) -> Vec<String> {
        let mut out = Vec::new();
        if ![self.x_min, self.x_max, self.y_min, self.y_max].iter().all(|v| v.is_finite()) {
            out.push("calibration values must be finite".to_string());
        }
        if self.x_min == self.x_max {
            out.push("x_min must differ from x_max".to_string());
        }
        if !(self.y_min < self.y_max) {
            out.push("y_min must be less than y_max".to_string());
        }
        if self.direction != 1 && self.direction != -1 {
            out.push("direction must be 1 or -1".to_string());
        }
        if circular {
            if (self.x_max - self.x_min).abs() > TAU + 1e-9 {
                out.push("angular span must not exceed 2*pi".to_string());
            }
            if self.pivot.is_none() {
                out.push("circular gauges need a pivot".to_string());
            }
        } else if self.axis.is_none() {
            out.push("linear gauges need an axis".to_string());
        }
        out
    }
}

/// Two-point linear interpolation anchored at both scale ends, clamped to
/// `[y_min, y_max]`. A direction of `-1` reflects about the scale midpoint.
pub fn map_needle_to_scale(x: f64, cal: &GaugeCalibration) -> f64 {
    let mut t = (x - cal.x_min) / (cal.x_max - cal.x_min);
    if cal.direction < 0 {
        t = 1.0 - t;
    }
    let y = cal.y_min + t * (cal.y_max - cal.y_min);
    y.clamp(cal.y_min, cal.y_max)
}

/// Expresses a measured angle in `(-pi, pi]` on the calibrated sweep from
/// `x_min` toward `x_max`. Angles in the dead zone outside the sweep snap to
/// the nearer end.
pub fn unwrap_angle(angle: f64, cal: &GaugeCalibration) -> f64 {
    let span = cal.x_max - cal.x_min;
    let d = if span > 0.0 {
        (angle - cal.x_min).rem_euclid(TAU)
    } else {
        -(cal.x_min - angle).rem_euclid(TAU)
    };
    let t = d / span;
    if t <= 1.0 {
        return cal.x_min + d;
    }
    let past_max = t - 1.0;
    let before_min = TAU / span.abs() - t;
    if past_max <= before_min {
        cal.x_max
    } else {
        cal.x_min
    }
}

/// Smallest absolute difference between two angles, in `[0, pi]`.
pub fn angular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    if d > PI {
        TAU - d
    } else {
        d
    }
}
