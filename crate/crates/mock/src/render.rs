use chrono::{DateTime, Utc};
use panel_imaging::{Homography, ImageBuffer, Point2};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::artifacts;
use crate::error::{MockError, Result};
use crate::raster::Canvas;
use crate::spec::{Glare, NoiseSpec, PanelSpec, Tilt};
use crate::truth::{truth_entry, GroundTruth};

/// Renders `spec` as seen by the camera at `timestamp`.
///
/// Artifacts and glare live on the panel plane. With a tilt, the panel is drawn
/// at a finer resolution and imaged through the tilt homography, which is the
/// last geometric step, so its inverse is exactly the calibration homography.
/// Gaussian noise models the sensor and is added to the final frame.
pub fn render_panel(spec: &PanelSpec, timestamp: DateTime<Utc>) -> Result<(ImageBuffer, GroundTruth)> {
    spec.validate()?;
    let tilt = spec.tilt.filter(|t| t.yaw_deg != 0.0 || t.pitch_deg != 0.0);
    let scale = if tilt.is_some() { PANEL_OVERSAMPLING } else { 1 };
    let mut img = ImageBuffer::filled_rgb(spec.width * scale, spec.height * scale, spec.background)?;
    {
        let mut canvas = Canvas::scaled(&mut img, scale);
        for a in &spec.artifacts {
            artifacts::draw(&mut canvas, a.placement, &a.artifact);
        }
    }
    if let Some(glare) = spec.noise.as_ref().and_then(|n| n.glare.as_ref()) {
        apply_glare(&mut img, glare, scale);
    }
    let mut truth = GroundTruth {
        timestamp,
        entries: spec.artifacts.iter().map(truth_entry).collect(),
        tilt_homography: None,
        panel_corners: None,
    };
    if let Some(tilt) = tilt {
        let (h, corners) = tilt_homography(spec.width, spec.height, tilt)?;
        img = camera_view(&img, scale, &h, spec.width, spec.height)?;
        truth.tilt_homography = Some(h);
        truth.panel_corners = Some(corners);
    }
    if let Some(noise) = &spec.noise {
        apply_sensor_noise(&mut img, noise, noise_seed(spec.seed, timestamp))?;
    }
    Ok((img, truth))
}

/// Panel pixels per canvas unit when the panel is imaged through a tilt.
const PANEL_OVERSAMPLING: usize = 3;
/// Samples per frame pixel side when imaging the panel.
const CAMERA_SAMPLES: usize = 3;

/// Images a panel drawn at `scale` through `h` (canvas to frame), averaging
/// a grid of bilinear panel samples over each frame pixel. Frame pixels that
/// see nothing of the panel stay black.
fn camera_view(panel: &ImageBuffer, scale: usize, h: &Homography, out_w: usize, out_h: usize) -> Result<ImageBuffer> {
    let m = h.inverse()?.m;
    let (w, hgt) = (panel.width(), panel.height());
    let (max_x, max_y) = ((w - 1) as f64, (hgt - 1) as f64);
    let src = panel.data();
    let k = scale as f64;
    let n = CAMERA_SAMPLES;
    let step = 1.0 / n as f64;
    let norm = 1.0 / (n * n) as f64;
    let mut out = ImageBuffer::new(out_w, out_h, 3)?;
    let dst = out.data_mut();
    for y in 0..out_h {
        for x in 0..out_w {
            let mut acc = [0.0f64; 3];
            for j in 0..n {
                let py = y as f64 - 0.5 + (j as f64 + 0.5) * step;
                for i in 0..n {
                    let px = x as f64 - 0.5 + (i as f64 + 0.5) * step;
                    let d = m[2][0] * px + m[2][1] * py + m[2][2];
                    if d.abs() < 1e-12 {
                        continue;
                    }
                    let qx = ((m[0][0] * px + m[0][1] * py + m[0][2]) / d + 0.5) * k - 0.5;
                    let qy = ((m[1][0] * px + m[1][1] * py + m[1][2]) / d + 0.5) * k - 0.5;
                    if !(qx >= -0.5 && qy >= -0.5 && qx <= max_x + 0.5 && qy <= max_y + 0.5) {
                        continue;
                    }
                    let (sx, sy) = (qx.clamp(0.0, max_x), qy.clamp(0.0, max_y));
                    let (x0, y0) = (sx as usize, sy as usize);
                    let (x1, y1) = ((x0 + 1).min(w - 1), (y0 + 1).min(hgt - 1));
                    let (fx, fy) = (sx - x0 as f64, sy - y0 as f64);
                    let w00 = (1.0 - fx) * (1.0 - fy);
                    let w10 = fx * (1.0 - fy);
                    let w01 = (1.0 - fx) * fy;
                    let w11 = fx * fy;
                    let (r0, r1) = (y0 * w * 3, y1 * w * 3);
                    let (i00, i10, i01, i11) = (r0 + x0 * 3, r0 + x1 * 3, r1 + x0 * 3, r1 + x1 * 3);
                    for c in 0..3 {
                        acc[c] += src[i00 + c] as f64 * w00
                            + src[i10 + c] as f64 * w10
                            + src[i01 + c] as f64 * w01
                            + src[i11 + c] as f64 * w11;
                    }
                }
            }
            let o = (y * out_w + x) * 3;
            for c in 0..3 {
                dst[o + c] = (acc[c] * norm).round().clamp(0.0, 255.0) as u8;
            }
        }
    }
    Ok(out)
}

fn noise_seed(seed: u64, timestamp: DateTime<Utc>) -> u64 {
    seed ^ (timestamp.timestamp_millis() as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

fn apply_sensor_noise(img: &mut ImageBuffer, noise: &NoiseSpec, seed: u64) -> Result<()> {
    if noise.gaussian_sigma > 0.0 {
        let normal = Normal::new(0.0, noise.gaussian_sigma)
            .map_err(|e| MockError::Spec(format!("noise: {e}")))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for v in img.data_mut() {
            *v = (*v as f64 + normal.sample(&mut rng)).round().clamp(0.0, 255.0) as u8;
        }
    }
    Ok(())
}

/// Additive white ellipse with Gaussian falloff; `rx`, `ry` are the 1-sigma
/// radii in canvas units.
fn apply_glare(img: &mut ImageBuffer, g: &Glare, scale: usize) {
    let (w, h) = (img.width(), img.height());
    let k = scale as f64;
    for y in 0..h {
        for x in 0..w {
            let dx = ((x as f64 + 0.5) / k - 0.5 - g.cx) / g.rx;
            let dy = ((y as f64 + 0.5) / k - 0.5 - g.cy) / g.ry;
            let add = g.intensity * (-0.5 * (dx * dx + dy * dy)).exp();
            if add < 0.5 {
                continue;
            }
            for v in img.pixel_mut(x, y) {
                *v = (*v as f64 + add).round().min(255.0) as u8;
            }
        }
    }
}

/// Canvas-to-frame homography of a pinhole camera looking at the panel plane
/// rotated by yaw (about the vertical axis) and pitch (about the horizontal
/// axis), scaled so the whole panel stays inside the frame.
///
/// Also returns the panel corners in frame coordinates, clockwise from top-left.
pub fn tilt_homography(width: usize, height: usize, tilt: Tilt) -> Result<(Homography, [Point2; 4])> {
    let (w, h) = (width as f64, height as f64);
    let (cx, cy) = ((w - 1.0) / 2.0, (h - 1.0) / 2.0);
    let f = 1.5 * w.max(h);
    let (sy, cyaw) = tilt.yaw_deg.to_radians().sin_cos();
    let (sp, cp) = tilt.pitch_deg.to_radians().sin_cos();
    let corners = [
        Point2::new(-0.5, -0.5),
        Point2::new(w - 0.5, -0.5),
        Point2::new(w - 0.5, h - 0.5),
        Point2::new(-0.5, h - 0.5),
    ];
    let project = |p: Point2| {
        let (x, y) = (p.x - cx, p.y - cy);
        // Yaw then pitch applied to (x, y, 0), plane pushed to depth f.
        let (x1, z1) = (cyaw * x, -sy * x);
        let (y2, z2) = (cp * y - sp * z1, sp * y + cp * z1);
        let z = f + z2;
        (f * x1 / z, f * y2 / z)
    };
    let projected = corners.map(project);
    let (mut lo_x, mut hi_x, mut lo_y, mut hi_y) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in &projected {
        lo_x = lo_x.min(x);
        hi_x = hi_x.max(x);
        lo_y = lo_y.min(y);
        hi_y = hi_y.max(y);
    }
    let s = (w / (hi_x - lo_x)).min(h / (hi_y - lo_y)).min(1.0);
    let (mx, my) = ((lo_x + hi_x) / 2.0, (lo_y + hi_y) / 2.0);
    let dst = projected.map(|(x, y)| Point2::new(cx + s * (x - mx), cy + s * (y - my)));
    Ok((Homography::from_points(&corners, &dst)?, dst))
}
