//! File formats, LLM backends and the command line around
//! [`founderseg_core`].

pub mod artifacts;
pub mod config;
pub mod csv_ingest;
pub mod error;
pub mod gateway;
pub mod manifest;
pub mod pipeline;
pub mod synth;

pub use error::{Error, Result};
pub use founderseg_core as core;
