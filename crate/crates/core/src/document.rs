//! A submission after text processing and classification.

use serde::{Deserialize, Serialize};

use crate::classifiers::{
    ClusteringId, EmotionPrediction, GibbsDistribution, ReflectiveLevel, SentimentPolarity,
    TopicAssignment,
};
use crate::lang::LanguageCode;
use crate::textproc::Sentence;

/// Outputs of every sentence-level port for one sentence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentenceAnalysis {
    pub emotions: EmotionPrediction,
    pub gibbs: GibbsDistribution,
    pub sentiment: SentimentPolarity,
    pub topic: TopicAssignment,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyzedDocument {
    /// The text that was analyzed (after translation, if any).
    pub text: String,
    pub language: LanguageCode,
    pub clustering: ClusteringId,
    pub sentences: Vec<Sentence>,
    /// Parallel to `sentences`.
    pub analyses: Vec<SentenceAnalysis>,
    /// Filled in after the level model has seen the rest of the document.
    pub level: Option<ReflectiveLevel>,
}
