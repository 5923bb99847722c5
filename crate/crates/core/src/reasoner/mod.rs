//! Rule-based feedback reasoner.
//!
//! [`build_profile`] aggregates an analyzed document into a [`TextProfile`];
//! [`select_prompts`] maps the profile's gaps onto prompt-database triggers;
//! [`compose_feedback`] assembles the chosen phrasings into a localized
//! message; [`export_feature_vector`] produces the radar vector.

mod compose;
mod profile;
mod prompts;
mod select;
mod vector;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::classifiers::{EmotionLabel, GibbsPhase};

pub use compose::{
    compose_feedback, level_name, phase_name, FeedbackResponse, ModelTag, SentenceAnnotation,
    SourceModel,
};
pub use profile::{build_profile, SentimentSummary, TextProfile, TopicSummary, WELL_THOUGHT_MIN_EXCLUSIVE};
pub use prompts::{
    LintIssue, LintReport, LinguisticRule, PromptDb, PromptRecord, RawPromptDb, Trigger,
    SUPPORTED_PLACEHOLDERS,
};
pub use select::{select_prompts, triggered_rules, FeedbackPlan, PlanItem};
pub use vector::{export_feature_vector, FEATURE_LABELS, FEATURE_VECTOR_LEN, FEATURE_VECTOR_VERSION};

#[derive(Debug, thiserror::Error)]
pub enum ReasonerError {
    #[error("document has no sentences")]
    EmptyDocument,
    #[error("document has no reflective level")]
    MissingLevel,
    #[error("prompt database gap: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    PromptGap(Vec<LintIssue>),
    #[error("prompt {record}: placeholder {{{name}}} has no value")]
    UnresolvedPlaceholder { record: String, name: String },
    #[error("prompt database: {0}")]
    Schema(String),
    #[error(transparent)]
    Translation(#[from] crate::textproc::TranslateError),
}

/// Which Gibbs predictions count as a phase being present in a sentence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GibbsPresence {
    /// Only the most probable phase.
    #[default]
    Top1,
    /// Any of the three most probable phases.
    AnyOfTop3,
}

/// Minimums below which a linguistic feature counts as under-represented.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LinguisticThresholds {
    pub min_mean_sentence_length: f64,
    pub min_connector_density: f64,
    pub min_adjective_noun_ratio: f64,
    pub min_adverb_verb_ratio: f64,
    pub min_lexical_variability: f64,
}

impl Default for LinguisticThresholds {
    fn default() -> Self {
        LinguisticThresholds {
            min_mean_sentence_length: 8.0,
            min_connector_density: 0.34,
            min_adjective_noun_ratio: 0.1,
            min_adverb_verb_ratio: 0.1,
            min_lexical_variability: 0.4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReasonerConfig {
    pub thresholds: LinguisticThresholds,
    /// Mean sentence length mapped to 1.0 in the feature vector.
    pub sentence_length_cap: f64,
    pub gibbs_presence: GibbsPresence,
    pub positive_emotions: BTreeSet<EmotionLabel>,
    pub negative_emotions: BTreeSet<EmotionLabel>,
}

impl Default for ReasonerConfig {
    fn default() -> Self {
        use EmotionLabel::*;
        ReasonerConfig {
            thresholds: LinguisticThresholds::default(),
            sentence_length_cap: 30.0,
            gibbs_presence: GibbsPresence::Top1,
            positive_emotions: BTreeSet::from([
                Appreciation,
                Interest,
                Anticipation,
                Excitement,
                Confidence,
                Motivation,
                Optimism,
                Satisfaction,
            ]),
            negative_emotions: BTreeSet::from([
                Annoyance,
                DisapprovalCritique,
                Challenged,
                Disappointment,
                Insecurity,
                Uncertainty,
                Wariness,
            ]),
        }
    }
}

/// The three phases with the lowest coverage; ties keep declaration order.
pub fn least_present_phases(profile: &TextProfile) -> [GibbsPhase; 3] {
    let mut phases = GibbsPhase::ALL.to_vec();
    phases.sort_by(|a, b| profile.coverage(*a).total_cmp(&profile.coverage(*b)));
    [phases[0], phases[1], phases[2]]
}
