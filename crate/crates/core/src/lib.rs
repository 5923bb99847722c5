//! Hybrid feedback engine for reflective essays.
//!
//! The pipeline segments and tags a submission, runs pluggable sentence-
//! and document-level classifiers (emotion, Gibbs phase, sentiment, topic,
//! reflective level), scores surface linguistic features, and composes
//! multilingual feedback with a fixed-layout feature vector. The
//! [`metrics`] module holds the evaluation metrics used to compare
//! classifier runs against gold annotations.

pub mod classifiers;
pub mod document;
pub mod engine;
pub mod gate;
pub mod lang;
pub mod lexicon;
pub mod lingscore;
pub mod metrics;
pub mod reasoner;
pub mod textproc;

pub use lang::{LanguageCode, PerLanguage};
pub use engine::{AnalyzeError, AnalyzeOptions, Engine, EngineConfig, SeedPolicy};
pub use lexicon::{DataSource, LexiconError};
