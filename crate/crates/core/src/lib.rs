//! Cascade-size prediction and per-comment influence analysis for
//! discussion threads that carry URLs.

pub mod cascade;
pub mod cli;
pub mod influence;
pub mod ingest;
pub mod learn;
pub mod manifest;
pub mod pipeline;
pub mod report;
pub mod stats;
pub mod synth;
pub mod urlclass;
pub mod util;
