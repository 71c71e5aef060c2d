use std::fmt;
use std::path::PathBuf;

use serde::Serialize;
use thiserror::Error;

/// One config problem at a JSON path such as `artifacts[2].roi`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            f.write_str(&self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

/// Every problem found in a config document; never empty.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ConfigErrors(pub Vec<ConfigError>);

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum TickError {
    #[error("frame is {got_w}x{got_h}, source declares {want_w}x{want_h}")]
    FrameSize {
        got_w: usize,
        got_h: usize,
        want_w: usize,
        want_h: usize,
    },
    #[error(transparent)]
    Imaging(#[from] panel_imaging::ImagingError),
}

#[derive(Debug, Error)]
pub enum SourceError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Document { path: PathBuf, message: String },
    #[error("{path}: {source}")]
    Image {
        path: PathBuf,
        #[source]
        source: panel_imaging::ImagingError,
    },
    #[error(transparent)]
    Mock(#[from] panel_mock::MockError),
}

#[derive(Debug, Error)]
pub enum StationError {
    #[error("invalid station config:\n{0}")]
    Config(#[from] ConfigErrors),
    #[error(transparent)]
    Source(#[from] SourceError),
    #[error(transparent)]
    Tick(#[from] TickError),
    #[error("cannot calibrate artifact '{artifact}': {message}")]
    Calibration { artifact: String, message: String },
}
