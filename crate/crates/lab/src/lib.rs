//! Batch driver for `spectra-core`: TOML run configs in, delimited tables or
//! JSON documents out.
//!
//! Exit codes: 0 when every check passes, 2 for configuration errors
//! (including families that are not regular), 3 for computation errors and
//! 4 when a check fails.

pub mod commands;
pub mod config;
mod error;
pub mod output;

pub use config::RunConfig;
pub use error::LabError;

/// Exit code for a completed run whose checks did not all pass.
pub const EXIT_CHECK_FAILED: u8 = 4;
