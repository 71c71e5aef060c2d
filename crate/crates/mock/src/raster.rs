//! Anti-aliased vector drawing into an RGB [`ImageBuffer`].
//!
//! Pixel `(x, y)` has its center at integer coordinates `(x, y)` and covers
//! `[x - 0.5, x + 0.5] x [y - 0.5, y + 0.5]`.

use panel_imaging::{ImageBuffer, Point2};

pub type Rgb = [u8; 3];

/// Drawing surface. Coordinates passed to the drawing methods are in canvas
/// units; with a `scale` of `k` the backing image holds `k x k` pixels per unit.
pub struct Canvas<'a> {
    img: &'a mut ImageBuffer,
    scale: f64,
}

impl<'a> Canvas<'a> {
    pub fn new(img: &'a mut ImageBuffer) -> Self {
        Self::scaled(img, 1)
    }

    pub fn scaled(img: &'a mut ImageBuffer, scale: usize) -> Self {
        debug_assert_eq!(img.channels(), 3);
        Self {
            img,
            scale: scale as f64,
        }
    }

    /// Canvas coordinate to backing-image coordinate.
    fn hi(&self, u: f64) -> f64 {
        (u + 0.5) * self.scale - 0.5
    }

    fn hi_point(&self, p: Point2) -> Point2 {
        Point2::new(self.hi(p.x), self.hi(p.y))
    }

    pub fn width(&self) -> usize {
        self.img.width()
    }

    pub fn height(&self) -> usize {
        self.img.height()
    }

    /// Blends `color` into pixel `(x, y)` with weight `coverage`.
    pub fn blend(&mut self, x: usize, y: usize, color: Rgb, coverage: f64) {
        if coverage <= 0.0 {
            return;
        }
        let a = coverage.min(1.0);
        let px = self.img.pixel_mut(x, y);
        for c in 0..3 {
            let v = px[c] as f64 * (1.0 - a) + color[c] as f64 * a;
            px[c] = v.round().clamp(0.0, 255.0) as u8;
        }
    }

    /// Integer pixel range covering `[lo, hi]`, clipped to the canvas.
    fn span(lo: f64, hi: f64, limit: usize) -> std::ops::Range<usize> {
        let a = (lo - 1.0).floor().max(0.0) as usize;
        let b = ((hi + 2.0).ceil().max(0.0) as usize).min(limit);
        a.min(b)..b
    }

    /// Axis-aligned rectangle `[x0, x1] x [y0, y1]` with exact area coverage.
    pub fn fill_rect(&mut self, x0: f64, y0: f64, x1: f64, y1: f64, color: Rgb) {
        let (x0, y0, x1, y1) = (self.hi(x0), self.hi(y0), self.hi(x1), self.hi(y1));
        for y in Self::span(y0, y1, self.height()) {
            let cy = overlap(y as f64 - 0.5, y as f64 + 0.5, y0, y1);
            if cy <= 0.0 {
                continue;
            }
            for x in Self::span(x0, x1, self.width()) {
                let cx = overlap(x as f64 - 0.5, x as f64 + 0.5, x0, x1);
                self.blend(x, y, color, cx * cy);
            }
        }
    }

    pub fn fill_circle(&mut self, center: Point2, radius: f64, color: Rgb) {
        self.fill_ring(center, 0.0, radius, color);
    }

    /// Annulus between `r_in` and `r_out`; `r_in = 0` fills a disk.
    pub fn fill_ring(&mut self, center: Point2, r_in: f64, r_out: f64, color: Rgb) {
        let (center, r_in, r_out) = (self.hi_point(center), r_in * self.scale, r_out * self.scale);
        let xs = Self::span(center.x - r_out, center.x + r_out, self.width());
        let ys = Self::span(center.y - r_out, center.y + r_out, self.height());
        for y in ys {
            for x in xs.clone() {
                let d = (x as f64 - center.x).hypot(y as f64 - center.y);
                let mut cov = (r_out - d + 0.5).clamp(0.0, 1.0);
                if r_in > 0.0 {
                    cov = cov.min((d - r_in + 0.5).clamp(0.0, 1.0));
                }
                self.blend(x, y, color, cov);
            }
        }
    }

    /// Round-capped stroke from `a` to `b`.
    pub fn line(&mut self, a: Point2, b: Point2, width: f64, color: Rgb) {
        let (a, b) = (self.hi_point(a), self.hi_point(b));
        let half = width * self.scale / 2.0;
        let xs = Self::span(a.x.min(b.x) - half, a.x.max(b.x) + half, self.width());
        let ys = Self::span(a.y.min(b.y) - half, a.y.max(b.y) + half, self.height());
        for y in ys {
            for x in xs.clone() {
                let d = segment_distance(Point2::new(x as f64, y as f64), a, b);
                self.blend(x, y, color, (half - d + 0.5).clamp(0.0, 1.0));
            }
        }
    }

    /// Fills every pixel for which `inside(px, py)` holds, estimated with
    /// `n x n` supersampling over the pixel footprint, within `bounds`.
    pub fn fill_shape(
        &mut self,
        bounds: (f64, f64, f64, f64),
        n: usize,
        color: Rgb,
        inside: impl Fn(f64, f64) -> bool,
    ) {
        let (x0, y0, x1, y1) = (self.hi(bounds.0), self.hi(bounds.1), self.hi(bounds.2), self.hi(bounds.3));
        let step = 1.0 / n as f64;
        let k = self.scale;
        for y in Self::span(y0, y1, self.height()) {
            for x in Self::span(x0, x1, self.width()) {
                let mut hits = 0;
                for j in 0..n {
                    for i in 0..n {
                        let sx = x as f64 - 0.5 + (i as f64 + 0.5) * step;
                        let sy = y as f64 - 0.5 + (j as f64 + 0.5) * step;
                        if inside((sx + 0.5) / k - 0.5, (sy + 0.5) / k - 0.5) {
                            hits += 1;
                        }
                    }
                }
                self.blend(x, y, color, hits as f64 / (n * n) as f64);
            }
        }
    }
}

fn overlap(a0: f64, a1: f64, b0: f64, b1: f64) -> f64 {
    (a1.min(b1) - a0.max(b0)).max(0.0)
}

pub fn segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).clamp(0.0, 1.0)
    };
    (p.x - (a.x + t * dx)).hypot(p.y - (a.y + t * dy))
}

/// Unit vector for a math-convention angle (counter-clockwise, y up) in image space.
pub fn direction(angle: f64) -> Point2 {
    Point2::new(angle.cos(), -angle.sin())
}
