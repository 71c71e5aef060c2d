use thiserror::Error;

pub type Result<T> = std::result::Result<T, ImagingError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ImagingError {
    #[error("invalid dimensions {width}x{height}x{channels}")]
    InvalidDimensions {
        width: usize,
        height: usize,
        channels: usize,
    },

    #[error("buffer length {actual} does not match {width}x{height}x{channels}")]
    LengthMismatch {
        width: usize,
        height: usize,
        channels: usize,
        actual: usize,
    },

    #[error("expected {expected}-channel image, got {actual} channels")]
    ChannelMismatch { expected: usize, actual: usize },

    #[error("kernel size {size} must be odd")]
    EvenKernel { size: usize },

    #[error("kernel size {size} exceeds image extent {extent}")]
    KernelTooLarge { size: usize, extent: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("image is not binary: found value {value} at ({x}, {y})")]
    NotBinary { x: usize, y: usize, value: u8 },

    #[error("region {roi} lies outside {width}x{height} image")]
    RoiOutOfBounds {
        roi: crate::BoundingBox,
        width: usize,
        height: usize,
    },

    #[error("template {template_w}x{template_h} does not fit search window {window_w}x{window_h}")]
    TemplateTooLarge {
        template_w: usize,
        template_h: usize,
        window_w: usize,
        window_h: usize,
    },

    #[error("degenerate point configuration: {0}")]
    Degenerate(String),

    #[error("singular homography (|det| = {det:e})")]
    Singular { det: f64 },

    #[error("png codec: {0}")]
    Codec(String),
}
