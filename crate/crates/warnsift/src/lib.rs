//! File formats, pipeline stages and the command line around
//! `warnsift-core`.

pub mod checkpoint;
pub mod cli;
pub mod corpus;
pub mod manifest;
pub mod pipeline;
pub mod report;

pub use checkpoint::Checkpoint;
pub use report::{parse_report, write_report, ParsedReport, ReportError};
