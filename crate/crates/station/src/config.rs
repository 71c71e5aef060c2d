use std::collections::HashMap;
use std::path::PathBuf;

use panel_imaging::{are_collinear, BoundingBox, Homography, Point2};
use panel_readers::{ReaderConfig, ReadingKind};
use serde::{Deserialize, Serialize};

use crate::error::{ConfigError, ConfigErrors};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationConfig {
    pub schema_version: u32,
    pub station_id: String,
    pub frame_source: FrameSourceConfig,
    /// Dimensions every source frame must have.
    pub frame_size: FrameSize,
    /// Panel-plane rectification applied to every frame before cropping.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perspective: Option<Perspective>,
    pub artifacts: Vec<ArtifactConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameSize {
    pub width: usize,
    pub height: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FrameSourceConfig {
    /// PNG files in lexicographic order.
    Directory { path: PathBuf, fps: u32 },
    /// A mock-panel document: a panel spec (one frame) or a sequence spec.
    Mock {
        path: PathBuf,
        fps: u32,
        /// Restart from the first frame when the sequence ends.
        #[serde(default)]
        repeat: bool,
    },
}

impl FrameSourceConfig {
    pub fn fps(&self) -> u32 {
        match self {
            FrameSourceConfig::Directory { fps, .. } | FrameSourceConfig::Mock { fps, .. } => *fps,
        }
    }
}

/// Maps the quadrilateral `src` (frame coordinates, clockwise from top-left,
/// marking the outer pixel edges of the plane) onto a `width x height` image.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Perspective {
    pub src: [Point2; 4],
    pub width: usize,
    pub height: usize,
}

impl Perspective {
    pub fn output_corners(&self) -> [Point2; 4] {
        let (w, h) = (self.width as f64, self.height as f64);
        [
            Point2::new(-0.5, -0.5),
            Point2::new(w - 0.5, -0.5),
            Point2::new(w - 0.5, h - 0.5),
            Point2::new(-0.5, h - 0.5),
        ]
    }

    pub fn homography(&self) -> panel_imaging::Result<Homography> {
        Homography::from_points(&self.src, &self.output_corners())
    }

    fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.width == 0 || self.height == 0 {
            out.push("output size must be non-empty".to_string());
        }
        if !self.src.iter().all(Point2::is_finite) {
            out.push("src points must be finite".to_string());
        }
        let s = &self.src;
        let triples = [[s[0], s[1], s[2]], [s[0], s[1], s[3]], [s[0], s[2], s[3]], [s[1], s[2], s[3]]];
        if triples.iter().any(|t| are_collinear(t)) {
            out.push("src points must not contain three collinear points".to_string());
        } else if self.homography().is_err() {
            out.push("src points do not define an invertible homography".to_string());
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArtifactConfig {
    /// Also the data-item id downstream.
    pub artifact_id: String,
    #[serde(flatten)]
    pub reader: ReaderConfig,
    /// Region in corrected-frame coordinates.
    pub roi: BoundingBox,
    #[serde(default)]
    pub units: String,
    /// Read on every Nth frame.
    #[serde(default = "default_divisor")]
    pub sample_divisor: u32,
    /// Rectification for an artifact on a different plane than the panel.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perspective: Option<Perspective>,
}

fn default_divisor() -> u32 {
    1
}

impl ArtifactConfig {
    pub fn kind(&self) -> ReadingKind {
        self.reader.kind()
    }

    /// Ids of the readings this artifact emits: its own, then one per fixture
    /// as `<artifact_id>.<fixture_id>` for fixture beds.
    pub fn data_item_ids(&self) -> Vec<String> {
        let mut ids = vec![self.artifact_id.clone()];
        if let ReaderConfig::FixtureState(p) = &self.reader {
            ids.extend(p.fixtures.iter().map(|f| fixture_item_id(&self.artifact_id, &f.id)));
        }
        ids
    }
}

pub fn fixture_item_id(artifact_id: &str, fixture_id: &str) -> String {
    format!("{artifact_id}.{fixture_id}")
}

/// A stream the station publishes, as declared to the agent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DataItem {
    pub id: String,
    pub kind: ReadingKind,
    pub units: String,
}

impl StationConfig {
    /// Size of the corrected frame an artifact's ROI refers to.
    pub fn corrected_size(&self, artifact: &ArtifactConfig) -> FrameSize {
        match artifact.perspective.as_ref().or(self.perspective.as_ref()) {
            Some(p) => FrameSize {
                width: p.width,
                height: p.height,
            },
            None => self.frame_size,
        }
    }

    pub fn data_items(&self) -> Vec<DataItem> {
        self.artifacts
            .iter()
            .flat_map(|a| {
                a.data_item_ids().into_iter().map(|id| DataItem {
                    id,
                    kind: a.kind(),
                    units: a.units.clone(),
                })
            })
            .collect()
    }

    /// Every semantic problem, each with a path-qualified location.
    pub fn validate(&self) -> Result<(), ConfigErrors> {
        let mut errs = Vec::new();
        let mut push = |path: String, message: String| errs.push(ConfigError { path, message });
        if self.schema_version != SCHEMA_VERSION {
            push(
                "schema_version".into(),
                format!("unsupported schema version {}, expected {SCHEMA_VERSION}", self.schema_version),
            );
        }
        if self.station_id.trim().is_empty() {
            push("station_id".into(), "must be non-empty".into());
        }
        if self.frame_source.fps() == 0 {
            push("frame_source.fps".into(), "must be at least 1".into());
        }
        if self.frame_size.width == 0 || self.frame_size.height == 0 {
            push("frame_size".into(), "must be non-empty".into());
        }
        if let Some(p) = &self.perspective {
            for m in p.problems() {
                push("perspective".into(), m);
            }
        }
        let mut seen: HashMap<String, usize> = HashMap::new();
        for (i, a) in self.artifacts.iter().enumerate() {
            let at = format!("artifacts[{i}]");
            if a.artifact_id.trim().is_empty() {
                push(format!("{at}.artifact_id"), "must be non-empty".into());
            } else if a.artifact_id.contains(['|', '\n', '\r']) {
                push(format!("{at}.artifact_id"), "must not contain '|' or line breaks".into());
            }
            for id in a.data_item_ids() {
                if let Some(&j) = seen.get(id.as_str()) {
                    push(
                        format!("{at}.artifact_id"),
                        format!("duplicate data item id '{id}' (artifacts[{j}] and artifacts[{i}])"),
                    );
                } else {
                    seen.insert(id, i);
                }
            }
            if a.sample_divisor == 0 {
                push(format!("{at}.sample_divisor"), "must be at least 1".into());
            }
            if let Some(p) = &a.perspective {
                for m in p.problems() {
                    push(format!("{at}.perspective"), m);
                }
            }
            let size = self.corrected_size(a);
            if a.roi.is_empty() || !a.roi.fits_within(size.width, size.height) {
                push(
                    format!("{at}.roi"),
                    format!("{} must lie within the {}x{} corrected frame", a.roi, size.width, size.height),
                );
            }
            for m in a.reader.problems(a.roi.width, a.roi.height) {
                push(format!("{at} ({})", a.artifact_id), m);
            }
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(ConfigErrors(errs))
        }
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("station configs always serialize")
    }
}

/// Parses and validates a station config document, reporting every problem found.
pub fn load_station_config(document: &[u8]) -> Result<StationConfig, ConfigErrors> {
    let de = &mut serde_json::Deserializer::from_slice(document);
    let cfg: StationConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        ConfigErrors(vec![ConfigError {
            path: if path == "." { String::new() } else { path },
            message: e.into_inner().to_string(),
        }])
    })?;
    cfg.validate()?;
    Ok(cfg)
}
