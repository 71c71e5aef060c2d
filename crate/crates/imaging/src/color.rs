use crate::buffer::{BoundingBox, ImageBuffer};
use crate::error::{ImagingError, Result};

/// ITU-R BT.601 luma: `round(0.299 R + 0.587 G + 0.114 B)`.
pub fn to_grayscale(img: &ImageBuffer) -> Result<ImageBuffer> {
    img.expect_channels(3)?;
    let data = img
        .data()
        .chunks_exact(3)
        .map(|p| luma(p[0], p[1], p[2]))
        .collect();
    ImageBuffer::from_raw(img.width(), img.height(), 1, data)
}

#[inline]
pub(crate) fn luma(r: u8, g: u8, b: u8) -> u8 {
    let y = 0.299 * r as f64 + 0.587 * g as f64 + 0.114 * b as f64;
    y.round().clamp(0.0, 255.0) as u8
}

/// Owned copy of `roi`. Out-of-bounds regions are an error, never clamped.
pub fn crop_roi(img: &ImageBuffer, roi: BoundingBox) -> Result<ImageBuffer> {
    if roi.is_empty() || !roi.fits_within(img.width(), img.height()) {
        return Err(ImagingError::RoiOutOfBounds {
            roi,
            width: img.width(),
            height: img.height(),
        });
    }
    let c = img.channels();
    let row_len = roi.width * c;
    let mut data = Vec::with_capacity(roi.height * row_len);
    for y in roi.y..roi.bottom() {
        let start = (y * img.width() + roi.x) * c;
        data.extend_from_slice(&img.data()[start..start + row_len]);
    }
    ImageBuffer::from_raw(roi.width, roi.height, c, data)
}
