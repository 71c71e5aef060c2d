use std::f64::consts::PI;

use panel_imaging::{crop_roi, extract_contours, hough_lines, match_template_ssd, BoundingBox, ImageBuffer};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{check, Verdict};

fn random_image(rng: &mut ChaCha8Rng, w: usize, h: usize, channels: usize) -> ImageBuffer {
    let data = (0..w * h * channels).map(|_| rng.random()).collect();
    ImageBuffer::from_raw(w, h, channels, data).unwrap()
}

/// Double-loop SSD over every placement; first strict minimum in row-major order.
fn exhaustive_ssd(img: &ImageBuffer, tmpl: &ImageBuffer) -> (usize, usize, u64) {
    let mut best = (0, 0, u64::MAX);
    for y in 0..=img.height() - tmpl.height() {
        for x in 0..=img.width() - tmpl.width() {
            let mut s = 0u64;
            for j in 0..tmpl.height() {
                for i in 0..tmpl.width() {
                    for c in 0..img.channels() {
                        let d = i64::from(img.get(x + i, y + j, c)) - i64::from(tmpl.get(i, j, c));
                        s += (d * d) as u64;
                    }
                }
            }
            if s < best.2 {
                best = (x, y, s);
            }
        }
    }
    best
}

fn ssd_cases(rng: &mut ChaCha8Rng) -> (usize, Option<String>) {
    let mut exact = 0;
    for case in 0..1000 {
        let channels = if rng.random_bool(0.5) { 1 } else { 3 };
        let (w, h) = (rng.random_range(1..=32), rng.random_range(1..=32));
        let img = random_image(rng, w, h, channels);
        let (tw, th) = (rng.random_range(1..=w.min(8)), rng.random_range(1..=h.min(8)));
        // Half the templates are crops (an exact match exists), half are noise.
        let tmpl = if rng.random_bool(0.5) {
            let (x, y) = (rng.random_range(0..=w - tw), rng.random_range(0..=h - th));
            crop_roi(&img, BoundingBox::new(x, y, tw, th)).unwrap()
        } else {
            random_image(rng, tw, th, channels)
        };
        let (m, _) = match_template_ssd(&img, &tmpl, img.bounds()).unwrap();
        let (bx, by, bs) = exhaustive_ssd(&img, &tmpl);
        if (m.top_left.x as usize, m.top_left.y as usize, m.score) != (bx, by, bs) {
            return (exact, Some(format!("case {case}: got {:?}, exhaustive ({bx},{by}) {bs}", m)));
        }
        exact += 1;
    }
    (exact, None)
}

/// Thin segment through `center` with direction `alpha`.
fn segment(size: usize, center: (f64, f64), alpha: f64, half_len: f64) -> ImageBuffer {
    let mut img = ImageBuffer::new(size, size, 1).unwrap();
    let steps = (half_len * 8.0) as i64;
    for s in -steps..=steps {
        let t = s as f64 / 8.0;
        let (x, y) = ((center.0 + t * alpha.cos()).round(), (center.1 + t * alpha.sin()).round());
        if x >= 0.0 && y >= 0.0 && (x as usize) < size && (y as usize) < size {
            img.set(x as usize, y as usize, 0, 255);
        }
    }
    img
}

/// Cell-by-cell vote count: for each (theta, rho) cell, the foreground
/// pixels whose rounded rho falls in it. Returns the strongest cell,
/// ties to smaller theta then smaller rho.
fn brute_force_peak(img: &ImageBuffer, theta_res: f64) -> (usize, isize, u32) {
    let pixels: Vec<(f64, f64)> = (0..img.height())
        .flat_map(|y| (0..img.width()).map(move |x| (x, y)))
        .filter(|&(x, y)| img.get(x, y, 0) != 0)
        .map(|(x, y)| (x as f64, y as f64))
        .collect();
    let diag = ((img.width().pow(2) + img.height().pow(2)) as f64).sqrt().ceil() as isize;
    let n_theta = (PI / theta_res).round() as usize;
    let mut best = (0, 0, 0u32);
    for t in 0..n_theta {
        let a = t as f64 * theta_res;
        for rho in -diag..=diag {
            let votes = pixels
                .iter()
                .filter(|(x, y)| (x * a.cos() + y * a.sin()).round() as isize == rho)
                .count() as u32;
            if votes > best.2 {
                best = (t, rho, votes);
            }
        }
    }
    best
}

fn hough_cases() -> (usize, Option<String>) {
    let theta_res = PI / 180.0;
    let mut ok = 0;
    for deg in [0.0f64, 30.0, 45.0, 60.0, 90.0, 120.0, 150.0] {
        let img = segment(64, (32.0, 32.0), deg.to_radians(), 24.0);
        let top = hough_lines(&img, 1.0, theta_res, 10).unwrap()[0];
        let (t, rho, votes) = brute_force_peak(&img, theta_res);
        let got_t = (top.theta / theta_res).round() as usize;
        if (got_t, top.rho.round() as isize, top.votes) != (t, rho, votes) {
            return (
                ok,
                Some(format!("{deg}°: hough ({got_t}, {}, {}), brute force ({t}, {rho}, {votes})", top.rho, top.votes)),
            );
        }
        ok += 1;
    }
    (ok, None)
}

/// 8-connected components by iterative flood fill.
fn flood_fill_count(img: &ImageBuffer) -> usize {
    let (w, h) = (img.width(), img.height());
    let mut seen = vec![false; w * h];
    let mut count = 0;
    for start in 0..w * h {
        if seen[start] || img.data()[start] == 0 {
            continue;
        }
        count += 1;
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(p) = stack.pop() {
            let (x, y) = ((p % w) as isize, (p / w) as isize);
            for (dx, dy) in [(-1, -1), (0, -1), (1, -1), (-1, 0), (1, 0), (-1, 1), (0, 1), (1, 1)] {
                let (nx, ny) = (x + dx, y + dy);
                if nx < 0 || ny < 0 || nx >= w as isize || ny >= h as isize {
                    continue;
                }
                let q = ny as usize * w + nx as usize;
                if !seen[q] && img.data()[q] != 0 {
                    seen[q] = true;
                    stack.push(q);
                }
            }
        }
    }
    count
}

fn contour_cases(rng: &mut ChaCha8Rng) -> (usize, Option<String>) {
    let mut ok = 0;
    for case in 0..500 {
        let (w, h) = (rng.random_range(1..=64), rng.random_range(1..=64));
        let density = rng.random_range(0.05..0.7);
        let data = (0..w * h).map(|_| if rng.random_bool(density) { 255 } else { 0 }).collect();
        let img = ImageBuffer::from_raw(w, h, 1, data).unwrap();
        let (got, want) = (extract_contours(&img).unwrap().len(), flood_fill_count(&img));
        if got != want {
            return (ok, Some(format!("case {case} ({w}x{h}): {got} contours, flood fill {want}")));
        }
        ok += 1;
    }
    (ok, None)
}

pub fn a10_imaging() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (ssd, ssd_err) = ssd_cases(&mut rng);
    let (hough, hough_err) = hough_cases();
    let (contours, contour_err) = contour_cases(&mut rng);
    let errors: Vec<String> = [ssd_err, hough_err, contour_err].into_iter().flatten().collect();
    let detail = format!(
        "SSD argmin exact {ssd}/1000, Hough peak equal {hough}/7, contour count equal {contours}/500{}",
        errors.first().map(|e| format!("; {e}")).unwrap_or_default()
    );
    check(errors.is_empty(), detail)
}
