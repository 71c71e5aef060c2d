//! Four-point homography estimation and perspective warping.

use serde::{Deserialize, Serialize};

use crate::buffer::{ImageBuffer, Point2};
use crate::error::{ImagingError, Result};
use crate::geometry::are_collinear;

const MIN_DET: f64 = 1e-9;

/// Row-major 3x3 projective map, normalized so `m[2][2] == 1` when possible.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Homography {
    pub m: [[f64; 3]; 3],
}

impl Homography {
    pub const IDENTITY: Homography = Homography {
        m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
    };

    /// Wraps a raw matrix, rejecting singular ones and normalizing the scale.
    pub fn new(m: [[f64; 3]; 3]) -> Result<Self> {
        if m.iter().flatten().any(|v| !v.is_finite()) {
            return Err(ImagingError::InvalidParameter(
                "homography has non-finite entries".into(),
            ));
        }
        let h = Homography { m }.normalized();
        let det = h.determinant();
        if det.abs() <= MIN_DET {
            return Err(ImagingError::Singular { det });
        }
        Ok(h)
    }

    pub fn scale(sx: f64, sy: f64) -> Self {
        Homography {
            m: [[sx, 0.0, 0.0], [0.0, sy, 0.0], [0.0, 0.0, 1.0]],
        }
    }

    fn normalized(mut self) -> Self {
        let s = self.m[2][2];
        if s != 0.0 {
            for v in self.m.iter_mut().flatten() {
                *v /= s;
            }
        }
        self
    }

    /// Solves the 8x8 system mapping each `src[i]` onto `dst[i]` with `h33 = 1`.
    pub fn from_points(src: &[Point2; 4], dst: &[Point2; 4]) -> Result<Self> {
        if src.iter().chain(dst).any(|p| !p.is_finite()) {
            return Err(ImagingError::Degenerate("non-finite point".into()));
        }
        if are_collinear(src) {
            return Err(ImagingError::Degenerate(
                "three source points are collinear".into(),
            ));
        }
        if are_collinear(dst) {
            return Err(ImagingError::Degenerate(
                "three destination points are collinear".into(),
            ));
        }

        // Normalize coordinates for conditioning, then undo afterwards.
        let (ts, src_n) = conditioning(src);
        let (td, dst_n) = conditioning(dst);

        let mut a = [[0.0f64; 9]; 8];
        for i in 0..4 {
            let (x, y) = (src_n[i].x, src_n[i].y);
            let (u, v) = (dst_n[i].x, dst_n[i].y);
            a[2 * i] = [x, y, 1.0, 0.0, 0.0, 0.0, -x * u, -y * u, u];
            a[2 * i + 1] = [0.0, 0.0, 0.0, x, y, 1.0, -x * v, -y * v, v];
        }
        let h = solve8(a).ok_or_else(|| ImagingError::Degenerate("singular 8x8 system".into()))?;
        let hn = [[h[0], h[1], h[2]], [h[3], h[4], h[5]], [h[6], h[7], 1.0]];

        let td_inv = Homography { m: td }.inverse()?;
        let full = mul(&mul(&td_inv.m, &hn), &ts);
        Homography::new(full)
    }

    pub fn determinant(&self) -> f64 {
        let m = &self.m;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn inverse(&self) -> Result<Self> {
        let m = &self.m;
        let det = self.determinant();
        if det.abs() <= MIN_DET || !det.is_finite() {
            return Err(ImagingError::Singular { det });
        }
        let inv = [
            [
                (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / det,
                (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / det,
                (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det,
            ],
            [
                (m[1][2] * m[2][0] - m[1][0] * m[2][2]) / det,
                (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det,
                (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / det,
            ],
            [
                (m[1][0] * m[2][1] - m[1][1] * m[2][0]) / det,
                (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / det,
                (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det,
            ],
        ];
        Ok(Homography { m: inv }.normalized())
    }

    pub fn compose(&self, other: &Homography) -> Homography {
        Homography {
            m: mul(&self.m, &other.m),
        }
        .normalized()
    }

    /// Maps `p` through the homography. Returns `None` at the line at infinity.
    pub fn apply(&self, p: Point2) -> Option<Point2> {
        let m = &self.m;
        let w = m[2][0] * p.x + m[2][1] * p.y + m[2][2];
        if w.abs() < 1e-12 {
            return None;
        }
        Some(Point2::new(
            (m[0][0] * p.x + m[0][1] * p.y + m[0][2]) / w,
            (m[1][0] * p.x + m[1][1] * p.y + m[1][2]) / w,
        ))
    }
}

fn mul(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

/// Similarity transform moving the centroid to the origin with mean distance sqrt(2).
fn conditioning(pts: &[Point2; 4]) -> ([[f64; 3]; 3], [Point2; 4]) {
    let cx = pts.iter().map(|p| p.x).sum::<f64>() / 4.0;
    let cy = pts.iter().map(|p| p.y).sum::<f64>() / 4.0;
    let mean = pts.iter().map(|p| (p.x - cx).hypot(p.y - cy)).sum::<f64>() / 4.0;
    let s = if mean > 0.0 { std::f64::consts::SQRT_2 / mean } else { 1.0 };
    let t = [[s, 0.0, -s * cx], [0.0, s, -s * cy], [0.0, 0.0, 1.0]];
    let out = pts.map(|p| Point2::new(s * (p.x - cx), s * (p.y - cy)));
    (t, out)
}

/// Gaussian elimination with partial pivoting on an 8x9 augmented matrix.
fn solve8(mut a: [[f64; 9]; 8]) -> Option<[f64; 8]> {
    for col in 0..8 {
        let pivot = (col..8).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, pivot);
        for row in col + 1..8 {
            let f = a[row][col] / a[col][col];
            if f != 0.0 {
                for c in col..9 {
                    a[row][c] -= f * a[col][c];
                }
            }
        }
    }
    let mut x = [0.0f64; 8];
    for row in (0..8).rev() {
        let s: f64 = (row + 1..8).map(|c| a[row][c] * x[c]).sum();
        x[row] = (a[row][8] - s) / a[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Inverse-maps every output pixel through `h` and samples bilinearly.
///
/// `h` maps input coordinates to output coordinates. Samples falling outside
/// the input are black.
pub fn warp_perspective(
    img: &ImageBuffer,
    h: &Homography,
    out_w: usize,
    out_h: usize,
) -> Result<ImageBuffer> {
    let inv = h.inverse()?;
    let mut out = ImageBuffer::new(out_w, out_h, img.channels())?;
    let c = img.channels();
    let (w, hgt) = (img.width(), img.height());
    let (max_x, max_y) = ((w - 1) as f64, (hgt - 1) as f64);
    let src = img.data();
    let m = inv.m;
    let eps = 1e-9;

    let dst = out.data_mut();
    for y in 0..out_h {
        let yf = y as f64;
        // Row-constant terms.
        let (bx, by, bw) = (
            m[0][1] * yf + m[0][2],
            m[1][1] * yf + m[1][2],
            m[2][1] * yf + m[2][2],
        );
        for x in 0..out_w {
            let xf = x as f64;
            let wz = m[2][0] * xf + bw;
            if wz.abs() < 1e-12 {
                continue;
            }
            let sx = (m[0][0] * xf + bx) / wz;
            let sy = (m[1][0] * xf + by) / wz;
            if !(sx >= -eps && sy >= -eps && sx <= max_x + eps && sy <= max_y + eps) {
                continue;
            }
            let sx = sx.clamp(0.0, max_x);
            let sy = sy.clamp(0.0, max_y);
            let x0 = sx.floor() as usize;
            let y0 = sy.floor() as usize;
            let x1 = (x0 + 1).min(w - 1);
            let y1 = (y0 + 1).min(hgt - 1);
            let fx = sx - x0 as f64;
            let fy = sy - y0 as f64;
            let o = (y * out_w + x) * c;
            for ch in 0..c {
                let p00 = src[(y0 * w + x0) * c + ch] as f64;
                let p10 = src[(y0 * w + x1) * c + ch] as f64;
                let p01 = src[(y1 * w + x0) * c + ch] as f64;
                let p11 = src[(y1 * w + x1) * c + ch] as f64;
                let top = p00 + (p10 - p00) * fx;
                let bot = p01 + (p11 - p01) * fx;
                dst[o + ch] = (top + (bot - top) * fy).round().clamp(0.0, 255.0) as u8;
            }
        }
    }
    Ok(out)
}
