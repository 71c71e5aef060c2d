//! The MTConnect side of a station: an adapter that turns readings into a
//! pipe-delimited line stream over TCP, and an agent that buffers those
//! lines and serves them over HTTP as XML.

pub mod adapter;
pub mod agent;
mod error;
pub mod wire;

pub use adapter::{Adapter, AdapterOptions, DEFAULT_ADAPTER_PORT, DEFAULT_BACKLOG, DEFAULT_HEARTBEAT_MS};
pub use agent::{
    follow_adapter, Agent, AppendOutcome, Category, ClientOptions, DataItemDef, DeviceModel, Observation,
    ObservationBuffer, SamplePage, DEFAULT_AGENT_PORT, DEFAULT_BUFFER_SIZE,
};
pub use error::{AgentError, WireError};
pub use wire::{
    format_data_line, format_number, parse_data_line, reading_to_data_line, readings_to_data_lines, DataLine, Line,
    UNAVAILABLE,
};
