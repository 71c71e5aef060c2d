//! Standard (rho, theta) Hough line transform.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::buffer::ImageBuffer;
use crate::error::{ImagingError, Result};

/// A line `x cos(theta) + y sin(theta) = rho` in pixel coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarLine {
    pub rho: f64,
    /// Normal angle in `[0, pi)`.
    pub theta: f64,
    pub votes: u32,
}

impl PolarLine {
    /// Perpendicular distance from `(x, y)` to the line.
    pub fn distance_to(&self, x: f64, y: f64) -> f64 {
        (x * self.theta.cos() + y * self.theta.sin() - self.rho).abs()
    }
}

/// Votes every foreground pixel into a `theta x rho` accumulator and returns
/// the 3x3 local maxima with at least `vote_threshold` votes.
///
/// Cells are `theta = i * theta_res` for `i < round(pi / theta_res)` and
/// `rho = j * rho_res` for `|rho| <= diagonal`. Results are sorted by votes
/// (descending), then smaller theta, then smaller rho.
pub fn hough_lines(
    bin: &ImageBuffer,
    rho_res: f64,
    theta_res: f64,
    vote_threshold: u32,
) -> Result<Vec<PolarLine>> {
    bin.expect_channels(1)?;
    if !(rho_res > 0.0) || !rho_res.is_finite() {
        return Err(ImagingError::InvalidParameter(format!(
            "rho_res must be positive, got {rho_res}"
        )));
    }
    if !(theta_res > 0.0 && theta_res <= PI / 36.0 + 1e-12) {
        return Err(ImagingError::InvalidParameter(format!(
            "theta_res must be in (0, pi/36], got {theta_res}"
        )));
    }
    let (w, h) = (bin.width(), bin.height());
    let n_theta = ((PI / theta_res).round() as usize).max(1);
    let diag = ((w * w + h * h) as f64).sqrt();
    let offset = (diag / rho_res).ceil() as isize;
    let n_rho = (2 * offset + 1) as usize;

    let (cos, sin): (Vec<f64>, Vec<f64>) = (0..n_theta)
        .map(|t| {
            let a = t as f64 * theta_res;
            (a.cos() / rho_res, a.sin() / rho_res)
        })
        .unzip();

    let mut acc = vec![0u32; n_theta * n_rho];
    let data = bin.data();
    for y in 0..h {
        for x in 0..w {
            if data[y * w + x] == 0 {
                continue;
            }
            let (xf, yf) = (x as f64, y as f64);
            for t in 0..n_theta {
                let r = (xf * cos[t] + yf * sin[t]).round() as isize + offset;
                acc[t * n_rho + r as usize] += 1;
            }
        }
    }

    // Neighbor lookup wraps theta: (rho, theta - pi) is the same line as (-rho, theta).
    let cell = |t: isize, r: isize| -> Option<(isize, isize, u32)> {
        let (t, r) = if t < 0 {
            (t + n_theta as isize, 2 * offset - r)
        } else if t >= n_theta as isize {
            (t - n_theta as isize, 2 * offset - r)
        } else {
            (t, r)
        };
        if r < 0 || r >= n_rho as isize {
            return None;
        }
        Some((t, r, acc[t as usize * n_rho + r as usize]))
    };

    let mut lines = Vec::new();
    for t in 0..n_theta as isize {
        for r in 0..n_rho as isize {
            let v = acc[t as usize * n_rho + r as usize];
            if v == 0 || v < vote_threshold {
                continue;
            }
            let mut is_peak = true;
            'nbhd: for dt in -1..=1isize {
                for dr in -1..=1isize {
                    if dt == 0 && dr == 0 {
                        continue;
                    }
                    let Some((nt, nr, n)) = cell(t + dt, r + dr) else {
                        continue;
                    };
                    // Plateaus resolve to their cell with the smallest (theta, rho).
                    let earlier = (nt, nr) < (t, r);
                    if n > v || (earlier && n == v) {
                        is_peak = false;
                        break 'nbhd;
                    }
                }
            }
            if is_peak {
                lines.push(PolarLine {
                    rho: (r - offset) as f64 * rho_res,
                    theta: t as f64 * theta_res,
                    votes: v,
                });
            }
        }
    }
    lines.sort_by(|a, b| {
        b.votes
            .cmp(&a.votes)
            .then(a.theta.total_cmp(&b.theta))
            .then(a.rho.total_cmp(&b.rho))
    });
    Ok(lines)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn canvas(w: usize, h: usize, on: impl IntoIterator<Item = (usize, usize)>) -> ImageBuffer {
        let mut img = ImageBuffer::new(w, h, 1).unwrap();
        for (x, y) in on {
            img.set(x, y, 0, 255);
        }
        img
    }

    const RES: f64 = PI / 180.0;

    #[test]
    fn vertical_segment() {
        let img = canvas(32, 32, (0..=20).map(|y| (10, y)));
        let top = hough_lines(&img, 1.0, RES, 5).unwrap()[0];
        assert!(top.theta.abs() <= RES + 1e-9);
        assert!((top.rho - 10.0).abs() <= 1.0);
        assert_eq!(top.votes, 21);
    }

    #[test]
    fn horizontal_segment() {
        let img = canvas(32, 32, (0..=20).map(|x| (x, 5)));
        let top = hough_lines(&img, 1.0, RES, 5).unwrap()[0];
        assert!((top.theta - PI / 2.0).abs() <= RES + 1e-9);
        assert!((top.rho - 5.0).abs() <= 1.0);
    }

    #[test]
    fn diagonal_segment() {
        let img = canvas(32, 32, (0..=20).map(|i| (i, i)));
        let top = hough_lines(&img, 1.0, RES, 5).unwrap()[0];
        assert!((top.theta - 3.0 * PI / 4.0).abs() <= RES + 1e-9);
        assert!(top.rho.abs() <= 1.0);
    }

    #[test]
    fn empty_foreground_is_not_an_error() {
        let img = ImageBuffer::new(8, 8, 1).unwrap();
        assert!(hough_lines(&img, 1.0, RES, 1).unwrap().is_empty());
    }

    #[test]
    fn parameter_validation() {
        let img = ImageBuffer::new(8, 8, 1).unwrap();
        assert!(hough_lines(&img, 0.0, RES, 1).is_err());
        assert!(hough_lines(&img, 1.0, 0.2, 1).is_err());
        assert!(hough_lines(&img, 1.0, PI / 36.0, 1).is_ok());
    }

    #[test]
    fn threshold_filters_weak_lines() {
        let img = canvas(32, 32, (0..=20).map(|y| (10, y)));
        assert!(hough_lines(&img, 1.0, RES, 22).unwrap().is_empty());
        let lines = hough_lines(&img, 1.0, RES, 21).unwrap();
        assert_eq!(lines.len(), 1);
    }
}
