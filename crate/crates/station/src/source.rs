//! Frame sources: PNG directories, mock-panel documents and in-memory frames.

use std::collections::VecDeque;
use std::path::{Path, PathBuf};

use chrono::{DateTime, TimeDelta, Utc};
use panel_imaging::{io::read_png, ImageBuffer};
use panel_mock::{frame_timestamp, render_sequence, PanelSpec, SequenceFrames, SequenceSpec};

use crate::config::FrameSourceConfig;
use crate::error::SourceError;
use crate::pipeline::truncate_to_millis;

#[derive(Debug, Clone)]
pub struct SourceFrame {
    pub image: ImageBuffer,
    pub timestamp: DateTime<Utc>,
}

/// Yields frames in order with strictly increasing timestamps; `None` when exhausted.
pub trait FrameSource: Send {
    fn next_frame(&mut self) -> Option<Result<SourceFrame, SourceError>>;
}

fn offset_ms(index: usize, fps: u32) -> TimeDelta {
    TimeDelta::milliseconds((index as f64 * 1000.0 / f64::from(fps.max(1))).round() as i64)
}

/// PNG files of a directory in lexicographic file-name order, stamped from
/// the moment the source is opened at the nominal frame period.
pub struct DirectorySource {
    files: Vec<PathBuf>,
    next: usize,
    start: DateTime<Utc>,
    fps: u32,
}

impl DirectorySource {
    pub fn open(dir: &Path, fps: u32) -> Result<Self, SourceError> {
        let io = |source| SourceError::Io {
            path: dir.to_path_buf(),
            source,
        };
        let mut files = Vec::new();
        for entry in std::fs::read_dir(dir).map_err(io)? {
            let path = entry.map_err(io)?.path();
            let is_png = path
                .extension()
                .is_some_and(|e| e.eq_ignore_ascii_case("png"));
            if is_png && path.is_file() {
                files.push(path);
            }
        }
        files.sort();
        Ok(Self {
            files,
            next: 0,
            start: truncate_to_millis(Utc::now()),
            fps,
        })
    }

    pub fn len(&self) -> usize {
        self.files.len()
    }

    pub fn is_empty(&self) -> bool {
        self.files.is_empty()
    }
}

impl FrameSource for DirectorySource {
    fn next_frame(&mut self) -> Option<Result<SourceFrame, SourceError>> {
        let path = self.files.get(self.next)?;
        let timestamp = self.start + offset_ms(self.next, self.fps);
        self.next += 1;
        Some(
            read_png(path)
                .map(|image| SourceFrame { image, timestamp })
                .map_err(|source| SourceError::Image {
                    path: path.clone(),
                    source,
                }),
        )
    }
}

/// Parses a mock document: a sequence (`{"base": ..., "fps": ..., "frames": [...]}`)
/// or a single panel spec, which becomes a one-frame sequence at `fps`.
pub fn parse_mock_document(bytes: &[u8], fps: u32) -> Result<SequenceSpec, String> {
    let doc: serde_json::Value = serde_json::from_slice(bytes).map_err(|e| e.to_string())?;
    if doc.get("base").is_some() {
        serde_json::from_value(doc).map_err(|e| format!("sequence spec: {e}"))
    } else {
        let base: PanelSpec = serde_json::from_value(doc).map_err(|e| format!("panel spec: {e}"))?;
        Ok(SequenceSpec {
            base,
            fps,
            frames: Vec::new(),
        })
    }
}

/// Renders a mock sequence lazily, optionally looping. Looped frames keep
/// counting up from the sequence epoch so timestamps stay increasing.
pub struct MockSource {
    seq: SequenceSpec,
    frames: SequenceFrames,
    repeat: bool,
    emitted: usize,
    /// A static panel is rendered once and reused when looping.
    still: Option<ImageBuffer>,
}

impl MockSource {
    pub fn new(seq: SequenceSpec, repeat: bool) -> Result<Self, SourceError> {
        let frames = render_sequence(&seq)?;
        Ok(Self {
            seq,
            frames,
            repeat,
            emitted: 0,
            still: None,
        })
    }

    pub fn open(path: &Path, fps: u32, repeat: bool) -> Result<Self, SourceError> {
        let bytes = std::fs::read(path).map_err(|source| SourceError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let seq = parse_mock_document(&bytes, fps).map_err(|message| SourceError::Document {
            path: path.to_path_buf(),
            message,
        })?;
        Self::new(seq, repeat)
    }
}

impl FrameSource for MockSource {
    fn next_frame(&mut self) -> Option<Result<SourceFrame, SourceError>> {
        let timestamp = frame_timestamp(self.emitted, self.seq.fps);
        if let Some(image) = &self.still {
            self.emitted += 1;
            return Some(Ok(SourceFrame {
                image: image.clone(),
                timestamp,
            }));
        }
        let frame = match self.frames.next() {
            Some(f) => f,
            None if self.repeat => {
                self.frames = match render_sequence(&self.seq) {
                    Ok(f) => f,
                    Err(e) => return Some(Err(e.into())),
                };
                self.frames.next()?
            }
            None => return None,
        };
        self.emitted += 1;
        Some(frame.map_err(SourceError::from).map(|f| {
            if self.repeat && self.seq.frames.len() <= 1 {
                self.still = Some(f.image.clone());
            }
            SourceFrame {
                image: f.image,
                timestamp,
            }
        }))
    }
}

/// Pre-built frames, e.g. a pre-rendered sequence for latency measurements.
pub struct MemorySource {
    frames: VecDeque<SourceFrame>,
}

impl MemorySource {
    pub fn new(frames: impl IntoIterator<Item = SourceFrame>) -> Self {
        Self {
            frames: frames.into_iter().collect(),
        }
    }
}

impl FrameSource for MemorySource {
    fn next_frame(&mut self) -> Option<Result<SourceFrame, SourceError>> {
        self.frames.pop_front().map(Ok)
    }
}

/// Opens the configured source; relative paths resolve against `base_dir`.
pub fn open_source(cfg: &FrameSourceConfig, base_dir: &Path) -> Result<Box<dyn FrameSource>, SourceError> {
    match cfg {
        FrameSourceConfig::Directory { path, fps } => Ok(Box::new(DirectorySource::open(&base_dir.join(path), *fps)?)),
        FrameSourceConfig::Mock { path, fps, repeat } => {
            Ok(Box::new(MockSource::open(&base_dir.join(path), *fps, *repeat)?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn panel_document_becomes_single_frame_sequence() {
        let spec = PanelSpec::new(64, 48);
        let bytes = serde_json::to_vec(&spec).unwrap();
        let seq = parse_mock_document(&bytes, 30).unwrap();
        assert_eq!(seq.fps, 30);
        assert!(seq.frames.is_empty());
        let mut src = MockSource::new(seq, false).unwrap();
        assert!(src.next_frame().unwrap().is_ok());
        assert!(src.next_frame().is_none());
    }

    #[test]
    fn looping_static_panel_keeps_counting() {
        let seq = SequenceSpec {
            base: PanelSpec::new(32, 32),
            fps: 10,
            frames: Vec::new(),
        };
        let mut src = MockSource::new(seq, true).unwrap();
        let stamps: Vec<_> = (0..4).map(|_| src.next_frame().unwrap().unwrap().timestamp).collect();
        assert!(stamps.windows(2).all(|w| w[1] - w[0] == TimeDelta::milliseconds(100)));
    }
}
