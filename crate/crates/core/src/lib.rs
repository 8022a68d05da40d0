//! Media agenda analysis: topic decomposition of a news corpus, sentiment
//! bias of entity mentions, and time-series comparison against a poll
//! spread.

pub mod bootstrap;
pub mod config;
pub mod corpus;
pub mod coverage;
pub mod error;
pub mod fixture;
pub mod nmf;
pub mod pipeline;
pub mod report;
pub mod sentiment;
pub mod series;
pub mod stats;
pub mod svg;
pub mod text;
pub mod vectorizer;

pub use config::PipelineConfig;
pub use error::{Error, Result};
pub use pipeline::{run_pipeline, run_stages, ReportBundle, Stages};
pub use report::{emit_outputs, Manifest};
