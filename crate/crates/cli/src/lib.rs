//! `panel-sight`: runs a station, its MTConnect adapter and agent, and the
//! calibration control API from one binary.

pub mod cli;
pub mod commands;
pub mod control;
mod error;
pub mod preview;

pub use error::CliError;
