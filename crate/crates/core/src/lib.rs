//! Citation-distribution analysis for author bibliographies.
//!
//! Records are ingested, truncated at the author's h-index, and the
//! resulting core is tested for Lotkaian (power-law) versus Gaussian
//! (lognormal) behaviour with a battery of statistics.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod corestats;
pub mod error;
pub mod genmodels;
pub mod ingest;
pub mod loglog;
pub mod pipeline;
pub mod powerlaw;
pub mod report;
pub mod rng;
pub mod stattests;

pub use error::{Error, Result};
pub use ingest::{AuthorDataset, WorkRecord, WorkType};
pub use pipeline::{analyze_dataset, AnalysisConfig, XminPolicy};
pub use report::AnalysisReport;
