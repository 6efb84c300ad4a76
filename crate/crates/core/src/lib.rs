//! Founder segmentation and success-prediction core.
//!
//! Everything in this crate is pure computation over in-memory values, so it
//! builds without `std`. Reading CSV files, talking to a hosted model, caching
//! completions on disk and the command line all live in the `founderseg`
//! crate, which plugs into the [`llm_gateway::Gateway`] trait defined here.
//!
//! Pipeline order:
//!
//! 1. [`ingest`]: merge the two founder tables, drop malformed profiles and
//!    draw the balanced working sample.
//! 2. [`edu_features`]: rule-based highest degree and field-of-study codes.
//! 3. [`segmentation`]: prompt chain (summary, level, personas, flags) and
//!    the parsers that validate each completion.
//! 4. [`features`]: 55-column numeric encoding.
//! 5. [`analytics`]: success-rate tables.
//! 6. [`ml`]: train/test split, three classifiers and their metrics.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

/// Crate version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub mod analytics;
pub mod edu_features;
pub mod features;
pub mod ingest;
pub mod llm_gateway;
pub mod ml;
pub mod segmentation;

pub use analytics::{FlagRatePair, RateRow};
pub use edu_features::{DegreeCode, EducationEntry, FieldCodeSet};
pub use features::{FeatureVector, LabeledMatrix, FEATURE_WIDTH};
pub use ingest::{Dataset, FounderRecord, Provenance};
pub use llm_gateway::{content_hash, BackendKind, Gateway, GatewayError, LlmRequest, LlmResponse, MockBackend};
pub use segmentation::{FlagVector, FounderSummary, LevelLabel, Persona, PersonaSet, SegmentLabels};
