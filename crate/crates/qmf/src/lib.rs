//! Seeded verification tasks over `qmf-core`, with JSON reports, report
//! merging and plain-text exports.

pub mod error;
pub mod export;
pub mod merge;
pub mod report;
pub mod suite;
pub mod tasks;

pub use error::{Error, Result};
pub use report::{Check, Origin, Report, RunConfig, Status};
