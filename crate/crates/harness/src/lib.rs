//! Experiment harness: configuration, the two-pass TR-NEWS procedure,
//! pulse inversion, delayed focusing, persistence and the audit used by the
//! `nltr` command-line tool.

pub mod commands;
pub mod config;
pub mod error;
pub mod experiments;
pub mod io;
pub mod model;
pub mod verify;

pub use config::ExperimentConfig;
pub use error::HarnessError;
pub use model::Model;
