use serde::{Deserialize, Serialize};

use crate::buffer::ImageBuffer;
use crate::error::{ImagingError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdMode {
    /// `255` where the input exceeds the threshold.
    #[default]
    Binary,
    /// `255` where the input is at or below the threshold.
    BinaryInverted,
}

/// Normalized 1-D Gaussian weights `exp(-d^2 / 2 sigma^2)` for `d` in `-k/2..=k/2`.
pub fn gaussian_kernel(size: usize, sigma: f64) -> Result<Vec<f64>> {
    if size == 0 || size % 2 == 0 {
        return Err(ImagingError::EvenKernel { size });
    }
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(ImagingError::InvalidParameter(format!(
            "sigma must be positive, got {sigma}"
        )));
    }
    let half = (size / 2) as f64;
    let mut weights: Vec<f64> = (0..size)
        .map(|i| {
            let d = i as f64 - half;
            (-d * d / (2.0 * sigma * sigma)).exp()
        })
        .collect();
    let sum: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= sum);
    Ok(weights)
}

fn check_kernel(img: &ImageBuffer, size: usize) -> Result<()> {
    if size == 0 || size % 2 == 0 {
        return Err(ImagingError::EvenKernel { size });
    }
    let extent = img.width().min(img.height());
    if size > extent {
        return Err(ImagingError::KernelTooLarge { size, extent });
    }
    Ok(())
}

/// Separable Gaussian blur with edge-replicate borders. Works on any channel count.
pub fn gaussian_blur(img: &ImageBuffer, kernel_size: usize, sigma: f64) -> Result<ImageBuffer> {
    check_kernel(img, kernel_size)?;
    let weights = gaussian_kernel(kernel_size, sigma)?;
    if kernel_size == 1 {
        return Ok(img.clone());
    }
    let (w, h, c) = (img.width(), img.height(), img.channels());
    let half = (kernel_size / 2) as isize;
    let src = img.data();

    // Horizontal pass into f64 so the vertical pass rounds only once.
    let mut tmp = vec![0.0f64; w * h * c];
    for y in 0..h {
        let row = y * w;
        for x in 0..w {
            for ch in 0..c {
                let mut acc = 0.0;
                for (k, wt) in weights.iter().enumerate() {
                    let sx = (x as isize + k as isize - half).clamp(0, w as isize - 1) as usize;
                    acc += wt * src[(row + sx) * c + ch] as f64;
                }
                tmp[(row + x) * c + ch] = acc;
            }
        }
    }

    let mut out = vec![0u8; w * h * c];
    for y in 0..h {
        for x in 0..w {
            for ch in 0..c {
                let mut acc = 0.0;
                for (k, wt) in weights.iter().enumerate() {
                    let sy = (y as isize + k as isize - half).clamp(0, h as isize - 1) as usize;
                    acc += wt * tmp[(sy * w + x) * c + ch];
                }
                out[(y * w + x) * c + ch] = acc.round().clamp(0.0, 255.0) as u8;
            }
        }
    }
    ImageBuffer::from_raw(w, h, c, out)
}

/// Median of each `k x k` edge-replicated neighborhood (gray input).
pub fn median_filter(img: &ImageBuffer, kernel_size: usize) -> Result<ImageBuffer> {
    img.expect_channels(1)?;
    check_kernel(img, kernel_size)?;
    if kernel_size == 1 {
        return Ok(img.clone());
    }
    let (w, h) = (img.width(), img.height());
    let half = (kernel_size / 2) as isize;
    let mut window = Vec::with_capacity(kernel_size * kernel_size);
    let mut out = vec![0u8; w * h];
    for y in 0..h {
        for x in 0..w {
            window.clear();
            for dy in -half..=half {
                let sy = (y as isize + dy).clamp(0, h as isize - 1) as usize;
                for dx in -half..=half {
                    let sx = (x as isize + dx).clamp(0, w as isize - 1) as usize;
                    window.push(img.get(sx, sy, 0));
                }
            }
            let mid = window.len() / 2;
            out[y * w + x] = *window.select_nth_unstable(mid).1;
        }
    }
    ImageBuffer::from_raw(w, h, 1, out)
}

/// Fixed-level binarization with strict `>` comparison.
pub fn threshold(img: &ImageBuffer, t: u8, mode: ThresholdMode) -> Result<ImageBuffer> {
    img.expect_channels(1)?;
    let (hi, lo) = match mode {
        ThresholdMode::Binary => (255, 0),
        ThresholdMode::BinaryInverted => (0, 255),
    };
    let data = img
        .data()
        .iter()
        .map(|&v| if v > t { hi } else { lo })
        .collect();
    ImageBuffer::from_raw(img.width(), img.height(), 1, data)
}
