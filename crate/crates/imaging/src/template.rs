use crate::buffer::{BoundingBox, ImageBuffer, Point2};
use crate::error::{ImagingError, Result};

/// Best placement of a template.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchResult {
    /// Top-left corner of the best placement, in image coordinates.
    pub top_left: Point2,
    /// Raw sum of squared differences.
    pub score: u64,
    /// `score / (area * channels * 255^2)`, in `[0, 1]`.
    pub normalized_score: f64,
}

/// SSD for every candidate placement inside the search window.
///
/// `scores[j * width + i]` is the placement with top-left
/// `(origin.x + i, origin.y + j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreMap {
    pub origin: (usize, usize),
    pub width: usize,
    pub height: usize,
    pub scores: Vec<u64>,
}

impl ScoreMap {
    pub fn at(&self, i: usize, j: usize) -> u64 {
        self.scores[j * self.width + i]
    }

    /// Renders the map as a gray image, low scores dark.
    pub fn to_image(&self) -> ImageBuffer {
        let max = self.scores.iter().copied().max().unwrap_or(0).max(1) as f64;
        let data = self
            .scores
            .iter()
            .map(|&s| (s as f64 / max * 255.0).round() as u8)
            .collect();
        ImageBuffer::from_raw(self.width, self.height, 1, data)
            .expect("score map is never empty")
    }
}

/// Exhaustive SSD template search inside `search`.
///
/// Every placement with the template fully inside the window is scored.
/// Ties resolve to the smaller `y`, then the smaller `x`.
pub fn match_template_ssd(
    img: &ImageBuffer,
    tmpl: &ImageBuffer,
    search: BoundingBox,
) -> Result<(MatchResult, ScoreMap)> {
    img.expect_channels(tmpl.channels())?;
    if search.is_empty() || !search.fits_within(img.width(), img.height()) {
        return Err(ImagingError::RoiOutOfBounds {
            roi: search,
            width: img.width(),
            height: img.height(),
        });
    }
    let (tw, th) = (tmpl.width(), tmpl.height());
    if tw > search.width || th > search.height {
        return Err(ImagingError::TemplateTooLarge {
            template_w: tw,
            template_h: th,
            window_w: search.width,
            window_h: search.height,
        });
    }
    let c = img.channels();
    let mw = search.width - tw + 1;
    let mh = search.height - th + 1;
    let row_len = tw * c;
    let src = img.data();
    let tdata = tmpl.data();
    let stride = img.width() * c;

    let mut scores = Vec::with_capacity(mw * mh);
    let mut best = (u64::MAX, 0usize, 0usize);
    for j in 0..mh {
        for i in 0..mw {
            let (x, y) = (search.x + i, search.y + j);
            let mut s = 0u64;
            for ty in 0..th {
                let a = &src[(y + ty) * stride + x * c..][..row_len];
                let b = &tdata[ty * row_len..][..row_len];
                s += a
                    .iter()
                    .zip(b)
                    .map(|(&p, &q)| {
                        let d = p as i32 - q as i32;
                        (d * d) as u64
                    })
                    .sum::<u64>();
            }
            // Row-major scan with strict `<` gives the (y, x) tie-break.
            if s < best.0 {
                best = (s, x, y);
            }
            scores.push(s);
        }
    }
    let denom = (tw * th * c) as f64 * 255.0 * 255.0;
    let result = MatchResult {
        top_left: Point2::new(best.1 as f64, best.2 as f64),
        score: best.0,
        normalized_score: best.0 as f64 / denom,
    };
    let map = ScoreMap {
        origin: (search.x, search.y),
        width: mw,
        height: mh,
        scores,
    };
    Ok((result, map))
}
