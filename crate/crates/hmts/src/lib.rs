//! Files, scenarios, parallel execution and command line for the
//! hierarchical-modulation time-sharing simulator.
//!
//! The numerical model lives in [`hmts_core`].

pub mod cli;
pub mod error;
pub mod formats;
pub mod run;
pub mod scenario;

pub use error::{Error, Result};
