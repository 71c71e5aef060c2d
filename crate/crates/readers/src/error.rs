use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReadError {
    #[error("no needle line passes within {pivot_radius} px of the pivot")]
    NeedleNotFound { pivot_radius: f64 },
    #[error("liquid surface not found (best normalized score {score:.4} above {threshold})")]
    SurfaceNotFound { score: f64, threshold: f64 },
    #[error("reader configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Imaging(#[from] panel_imaging::ImagingError),
}

impl ReadError {
    /// Declared not-found outcomes, as opposed to faults.
    pub fn is_not_found(&self) -> bool {
        matches!(self, ReadError::NeedleNotFound { .. } | ReadError::SurfaceNotFound { .. })
    }
}

pub type Result<T> = std::result::Result<T, ReadError>;

pub(crate) fn config<T>(msg: impl Into<String>) -> Result<T> {
    Err(ReadError::Config(msg.into()))
}
