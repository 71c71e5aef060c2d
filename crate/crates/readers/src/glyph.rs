//! Template-library character recognition for LCD-style text.

use panel_imaging::{match_template_ssd, threshold, to_grayscale, BoundingBox, ImageBuffer, ThresholdMode};
use serde::{Deserialize, Serialize};

use crate::encoded::EncodedImage;
use crate::error::{config, Result};
use crate::reading::Observation;

/// One library glyph: a gray image cropped to its ink columns, full line height.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlyphTemplate {
    pub ch: char,
    pub image: EncodedImage,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlyphTextParams {
    pub library: Vec<GlyphTemplate>,
    /// Largest normalized SSD at which a glyph is accepted.
    #[serde(default = "default_accept")]
    pub accept_threshold: f64,
    /// Gray level separating ink from background.
    #[serde(default = "default_ink_threshold")]
    pub ink_threshold: u8,
    /// `binary_inverted` for dark ink on a light background.
    #[serde(default = "default_ink_mode")]
    pub ink_mode: ThresholdMode,
    /// Gap in pixels at and above which a space is emitted; defaults to
    /// 1.2 times the widest library glyph.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space_gap: Option<usize>,
}

fn default_accept() -> f64 {
    0.05
}

fn default_ink_threshold() -> u8 {
    100
}

fn default_ink_mode() -> ThresholdMode {
    ThresholdMode::BinaryInverted
}

impl GlyphTextParams {
    pub fn new(library: Vec<GlyphTemplate>) -> Self {
        Self {
            library,
            accept_threshold: default_accept(),
            ink_threshold: default_ink_threshold(),
            ink_mode: default_ink_mode(),
            space_gap: None,
        }
    }

    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.library.is_empty() {
            out.push("glyph library is empty".to_string());
        }
        if let Some(first) = self.library.first() {
            let h = first.image.0.height();
            for g in &self.library {
                if g.image.0.height() != h {
                    out.push(format!("glyph '{}' height differs from the library height {h}", g.ch));
                }
                if !g.image.0.is_gray() {
                    out.push(format!("glyph '{}' must be single-channel", g.ch));
                }
            }
        }
        if !(self.accept_threshold > 0.0 && self.accept_threshold <= 1.0) {
            out.push("accept_threshold must be in (0, 1]".to_string());
        }
        out
    }
}

/// Runs of columns containing ink, as `[start, end)`.
pub fn ink_columns(bin: &ImageBuffer) -> Vec<(usize, usize)> {
    let (w, h) = (bin.width(), bin.height());
    let inked: Vec<bool> = (0..w).map(|x| (0..h).any(|y| bin.get(x, y, 0) != 0)).collect();
    let mut runs = Vec::new();
    let mut start = None;
    for (x, &on) in inked.iter().chain(std::iter::once(&false)).enumerate() {
        match (on, start) {
            (true, None) => start = Some(x),
            (false, Some(s)) => {
                runs.push((s, x));
                start = None;
            }
            _ => {}
        }
    }
    runs
}

pub fn read_glyph_text(roi: &ImageBuffer, params: &GlyphTextParams) -> Result<Observation> {
    if params.library.is_empty() {
        return config("glyph library is empty");
    }
    let gray = if roi.is_gray() { roi.clone() } else { to_grayscale(roi)? };
    let bin = threshold(&gray, params.ink_threshold, params.ink_mode)?;
    let boxes = ink_columns(&bin);
    let widest = params.library.iter().map(|g| g.image.0.width()).max().unwrap_or(1);
    let space_gap = params
        .space_gap
        .unwrap_or(((widest as f64) * 1.2).round() as usize)
        .max(1);

    let mut text = String::new();
    let mut recognized = 0;
    let mut prev_end = None;
    for &(x0, x1) in &boxes {
        if prev_end.is_some_and(|e| x0 - e >= space_gap) {
            text.push(' ');
        }
        prev_end = Some(x1);
        let sx0 = x0.saturating_sub(1);
        let sx1 = (x1 + 1).min(gray.width());
        let window = BoundingBox::new(sx0, 0, sx1 - sx0, gray.height());
        let mut best: Option<(char, f64)> = None;
        for g in &params.library {
            let t = &g.image.0;
            if t.width() > window.width || t.height() > window.height || t.width() + 2 < x1 - x0 {
                continue;
            }
            let (m, _) = match_template_ssd(&gray, t, window)?;
            if best.is_none_or(|(_, s)| m.normalized_score < s) {
                best = Some((g.ch, m.normalized_score));
            }
        }
        match best {
            Some((c, score)) if score <= params.accept_threshold => {
                text.push(c);
                recognized += 1;
            }
            _ => text.push('?'),
        }
    }
    let symbols = text.chars().filter(|&c| c != ' ').count();
    let confidence = if symbols == 0 { 1.0 } else { recognized as f64 / symbols as f64 };
    Ok(Observation::new(text, confidence))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// 3x5 toy glyphs: ink 0, background 255.
    fn toy(rows: [&str; 5]) -> ImageBuffer {
        ImageBuffer::from_fn_gray(3, 5, |x, y| if rows[y].as_bytes()[x] == b'#' { 0 } else { 255 }).unwrap()
    }

    fn library() -> Vec<GlyphTemplate> {
        vec![
            GlyphTemplate { ch: 'R', image: toy(["##.", "#.#", "##.", "#.#", "#.#"]).into() },
            GlyphTemplate { ch: 'U', image: toy(["#.#", "#.#", "#.#", "#.#", "###"]).into() },
            GlyphTemplate { ch: 'N', image: toy(["#.#", "###", "###", "###", "#.#"]).into() },
        ]
    }

    fn tile(chars: &[&ImageBuffer], gap: usize) -> ImageBuffer {
        let w = chars.len() * 3 + (chars.len() + 1) * gap;
        let mut out = ImageBuffer::filled(w, 7, 1, 255).unwrap();
        for (i, g) in chars.iter().enumerate() {
            let ox = gap + i * (3 + gap);
            for y in 0..5 {
                for x in 0..3 {
                    out.set(ox + x, y + 1, 0, g.get(x, y, 0));
                }
            }
        }
        out
    }

    #[test]
    fn reads_tiled_library_glyphs() {
        let lib = library();
        let roi = tile(&[&lib[0].image.0, &lib[1].image.0, &lib[2].image.0], 1);
        let obs = read_glyph_text(&roi, &GlyphTextParams::new(lib)).unwrap();
        assert_eq!(obs.value.as_text(), Some("RUN"));
        assert_eq!(obs.confidence, 1.0);
    }

    #[test]
    fn blank_roi_reads_empty() {
        let roi = ImageBuffer::filled(20, 7, 1, 255).unwrap();
        let obs = read_glyph_text(&roi, &GlyphTextParams::new(library())).unwrap();
        assert_eq!(obs.value.as_text(), Some(""));
    }

    #[test]
    fn noise_glyph_is_rejected() {
        let lib = library();
        let noise = ImageBuffer::from_fn_gray(3, 5, |x, y| [0, 255, 90, 200, 0, 40, 255][(x * 5 + y * 3) % 7]).unwrap();
        let roi = tile(&[&lib[0].image.0, &noise, &lib[2].image.0], 1);
        let obs = read_glyph_text(&roi, &GlyphTextParams::new(lib)).unwrap();
        assert_eq!(obs.value.as_text(), Some("R?N"));
    }

    #[test]
    fn empty_library_is_a_config_error() {
        let roi = ImageBuffer::filled(20, 7, 1, 255).unwrap();
        assert!(read_glyph_text(&roi, &GlyphTextParams::new(vec![])).is_err());
    }
}
