//! Station runtime: loads a station config, rectifies each frame onto the
//! panel plane, fans the artifact ROIs out to their readers and emits
//! timestamped readings as newline-delimited JSON.

pub mod calibrate;
mod config;
mod error;
mod json;
mod pipeline;
mod run;
pub mod source;

pub use calibrate::{calibrate_mock, mock_perspective, CalibrationOptions};
pub use config::{
    fixture_item_id, load_station_config, ArtifactConfig, DataItem, FrameSize, FrameSourceConfig, Perspective,
    StationConfig, SCHEMA_VERSION,
};
pub use error::{ConfigError, ConfigErrors, SourceError, StationError, TickError};
pub use json::{format_timestamp, parse_timestamp, reading_to_json, ReadingRecord};
pub use pipeline::{read_artifact, truncate_to_millis, Station};
pub use run::{percentile, run_station, LatencyStats, RunOptions, RunSummary, StationHandle, StatsSnapshot};
pub use source::{open_source, DirectorySource, FrameSource, MemorySource, MockSource, SourceFrame};
