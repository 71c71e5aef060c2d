use thiserror::Error;

#[derive(Debug, Error)]
pub enum MockError {
    #[error("invalid panel spec: {0}")]
    Spec(String),
    #[error("fps must be at least 1")]
    ZeroFps,
    #[error(transparent)]
    Imaging(#[from] panel_imaging::ImagingError),
}

pub type Result<T> = std::result::Result<T, MockError>;
