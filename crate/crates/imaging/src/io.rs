//! PNG encoding and decoding for 8-bit gray and RGB buffers.

use std::io::Cursor;
use std::path::Path;

use image::{DynamicImage, ImageFormat};

use crate::buffer::ImageBuffer;
use crate::error::{ImagingError, Result};

fn codec<E: std::fmt::Display>(e: E) -> ImagingError {
    ImagingError::Codec(e.to_string())
}

/// Decodes a PNG. Gray and gray+alpha become 1 channel, everything else RGB.
pub fn decode_png(bytes: &[u8]) -> Result<ImageBuffer> {
    let img = image::load_from_memory_with_format(bytes, ImageFormat::Png).map_err(codec)?;
    from_dynamic(img)
}

fn from_dynamic(img: DynamicImage) -> Result<ImageBuffer> {
    let (w, h) = (img.width() as usize, img.height() as usize);
    match img {
        DynamicImage::ImageLuma8(g) => ImageBuffer::from_raw(w, h, 1, g.into_raw()),
        DynamicImage::ImageLumaA8(_) | DynamicImage::ImageLuma16(_) | DynamicImage::ImageLumaA16(_) => {
            ImageBuffer::from_raw(w, h, 1, img.to_luma8().into_raw())
        }
        other => ImageBuffer::from_raw(w, h, 3, other.to_rgb8().into_raw()),
    }
}

pub fn encode_png(img: &ImageBuffer) -> Result<Vec<u8>> {
    let dynamic = to_dynamic(img)?;
    let mut out = Cursor::new(Vec::new());
    dynamic.write_to(&mut out, ImageFormat::Png).map_err(codec)?;
    Ok(out.into_inner())
}

fn to_dynamic(img: &ImageBuffer) -> Result<DynamicImage> {
    let (w, h) = (img.width() as u32, img.height() as u32);
    let data = img.data().to_vec();
    Ok(match img.channels() {
        1 => DynamicImage::ImageLuma8(
            image::GrayImage::from_raw(w, h, data).ok_or_else(|| codec("gray buffer size"))?,
        ),
        _ => DynamicImage::ImageRgb8(
            image::RgbImage::from_raw(w, h, data).ok_or_else(|| codec("rgb buffer size"))?,
        ),
    })
}

pub fn read_png(path: impl AsRef<Path>) -> Result<ImageBuffer> {
    let bytes = std::fs::read(path.as_ref()).map_err(codec)?;
    decode_png(&bytes)
}

pub fn write_png(img: &ImageBuffer, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path.as_ref(), encode_png(img)?).map_err(codec)
}
