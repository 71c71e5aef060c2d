use crate::buffer::{BoundingBox, ImageBuffer, Point2};
use crate::error::{ImagingError, Result};

/// One 8-connected foreground component.
#[derive(Debug, Clone, PartialEq)]
pub struct Contour {
    /// Outer border pixels in clockwise tracing order, starting at the
    /// top-most, left-most pixel of the component.
    pub points: Vec<Point2>,
    /// Pixel count of the component.
    pub area: usize,
    pub bounding_box: BoundingBox,
}

// Clockwise in image coordinates (y down), starting east.
const DIRS: [(isize, isize); 8] = [
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
    (0, -1),
    (1, -1),
];

/// Labels 8-connected foreground components and traces the outer border of each.
///
/// Input must contain only `0` and `255`. Contours come back sorted by area,
/// largest first; equal areas keep raster order of their first pixel.
pub fn extract_contours(bin: &ImageBuffer) -> Result<Vec<Contour>> {
    bin.expect_channels(1)?;
    let (w, h) = (bin.width(), bin.height());
    for (i, &v) in bin.data().iter().enumerate() {
        if v != 0 && v != 255 {
            return Err(ImagingError::NotBinary {
                x: i % w,
                y: i / w,
                value: v,
            });
        }
    }

    let labels = label_components(bin);
    let mut stats: Vec<(usize, usize, usize, usize, usize, usize)> = Vec::new(); // first, area, x0, y0, x1, y1
    let mut slot = vec![usize::MAX; w * h + 1];
    for y in 0..h {
        for x in 0..w {
            let l = labels[y * w + x];
            if l == 0 {
                continue;
            }
            if slot[l] == usize::MAX {
                slot[l] = stats.len();
                stats.push((y * w + x, 0, x, y, x, y));
            }
            let s = &mut stats[slot[l]];
            s.1 += 1;
            s.2 = s.2.min(x);
            s.3 = s.3.min(y);
            s.4 = s.4.max(x);
            s.5 = s.5.max(y);
        }
    }

    let mut contours: Vec<Contour> = stats
        .iter()
        .map(|&(first, area, x0, y0, x1, y1)| Contour {
            points: trace_border(bin, first % w, first / w),
            area,
            bounding_box: BoundingBox::new(x0, y0, x1 - x0 + 1, y1 - y0 + 1),
        })
        .collect();
    // Stable sort keeps raster order among equal areas.
    contours.sort_by(|a, b| b.area.cmp(&a.area));
    Ok(contours)
}

/// Two-pass union-find labeling. Label 0 is background.
fn label_components(bin: &ImageBuffer) -> Vec<usize> {
    let (w, h) = (bin.width(), bin.height());
    let data = bin.data();
    let mut labels = vec![0usize; w * h];
    let mut parent: Vec<usize> = vec![0];

    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }

    for y in 0..h {
        for x in 0..w {
            if data[y * w + x] == 0 {
                continue;
            }
            // Already-visited neighbors: W, NW, N, NE.
            let mut neighbors = [0usize; 4];
            let mut n = 0;
            let mut push = |l: usize| {
                if l != 0 {
                    neighbors[n] = l;
                    n += 1;
                }
            };
            if x > 0 {
                push(labels[y * w + x - 1]);
            }
            if y > 0 {
                if x > 0 {
                    push(labels[(y - 1) * w + x - 1]);
                }
                push(labels[(y - 1) * w + x]);
                if x + 1 < w {
                    push(labels[(y - 1) * w + x + 1]);
                }
            }
            if n == 0 {
                let l = parent.len();
                parent.push(l);
                labels[y * w + x] = l;
            } else {
                let mut root = find(&mut parent, neighbors[0]);
                for &l in &neighbors[1..n] {
                    let r = find(&mut parent, l);
                    if r != root {
                        let (lo, hi) = if r < root { (r, root) } else { (root, r) };
                        parent[hi] = lo;
                        root = lo;
                    }
                }
                labels[y * w + x] = root;
            }
        }
    }
    for l in labels.iter_mut() {
        if *l != 0 {
            *l = find(&mut parent, *l);
        }
    }
    labels
}

/// Moore-neighbor border following from `(sx, sy)`, the first raster pixel of
/// its component (so its west neighbor is background).
fn trace_border(bin: &ImageBuffer, sx: usize, sy: usize) -> Vec<Point2> {
    let (w, h) = (bin.width() as isize, bin.height() as isize);
    let fg = |x: isize, y: isize| x >= 0 && y >= 0 && x < w && y < h && bin.get(x as usize, y as usize, 0) != 0;
    let dir_of = |dx: isize, dy: isize| DIRS.iter().position(|&d| d == (dx, dy)).unwrap();

    let start = (sx as isize, sy as isize);
    let mut points = vec![Point2::new(sx as f64, sy as f64)];
    let mut cur = start;
    let mut back = 4usize; // came from the west
    let mut first_step: Option<(isize, isize)> = None;

    // Bounded by the number of pixel-direction pairs.
    for _ in 0..(8 * w * h) as usize {
        let mut next = None;
        for i in 1..=8 {
            let d = (back + i) % 8;
            let q = (cur.0 + DIRS[d].0, cur.1 + DIRS[d].1);
            if fg(q.0, q.1) {
                let pd = (back + i - 1) % 8;
                let b = (cur.0 + DIRS[pd].0, cur.1 + DIRS[pd].1);
                next = Some((q, dir_of(b.0 - q.0, b.1 - q.1)));
                break;
            }
        }
        let Some((q, new_back)) = next else {
            break; // isolated pixel
        };
        if cur == start {
            match first_step {
                None => first_step = Some(q),
                Some(f) if f == q => break,
                Some(_) => {}
            }
        }
        points.push(Point2::new(q.0 as f64, q.1 as f64));
        cur = q;
        back = new_back;
    }
    // The walk re-enters the start pixel before detecting closure.
    if points.len() > 1 && points.last() == points.first() {
        points.pop();
    }
    points
}
