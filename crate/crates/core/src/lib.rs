//! Core of the warning verifier.
//!
//! Everything in this crate is pure computation over in-memory values and
//! builds without `std`: warning records and fingerprints, the commit-pair
//! labeling rules, a Java-subset front end with a three-address IR and
//! dependence slicing, tokenization, and the attention verifier together with
//! the reverse-mode tape it trains on. File formats and the command line live
//! in the `warnsift` crate.

#![no_std]

extern crate alloc;

pub mod context;
pub mod dataset;
pub mod encoding;
pub mod metrics;
pub mod nn;
pub mod report;

pub use dataset::{Label, LabeledWarning};
pub use report::{Category, WarningFingerprint, WarningRecord};
