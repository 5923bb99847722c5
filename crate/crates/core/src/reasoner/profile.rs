use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{GibbsPresence, ReasonerConfig, ReasonerError};
use crate::classifiers::{
    ClusteringId, EmotionLabel, GibbsPhase, ReflectiveLevel, SentimentPolarity,
};
use crate::document::AnalyzedDocument;
use crate::lang::LanguageCode;
use crate::lingscore::LinguisticProfile;

/// A topic is well thought through when strictly more than this many of its
/// sentences peak at `analysis`.
pub const WELL_THOUGHT_MIN_EXCLUSIVE: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SentimentSummary {
    AllPositive,
    AllNegative,
    Mixed,
    AllNeutral,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicSummary {
    pub clustering_id: ClusteringId,
    pub topic_id: usize,
    pub topic: String,
    pub matched_terms: Vec<String>,
    pub sentence_count: usize,
    pub analysis_sentence_count: usize,
    pub well_thought: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TextProfile {
    pub linguistic: LinguisticProfile,
    /// Sentences per phase by argmax; sums to the sentence count.
    pub gibbs_histogram: BTreeMap<GibbsPhase, usize>,
    /// Share of sentences in which each phase is present.
    pub gibbs_coverage: BTreeMap<GibbsPhase, f64>,
    /// Emotion labels over all sentences, `no-emotion` excluded.
    pub emotions_present: BTreeMap<EmotionLabel, usize>,
    pub sentiment_summary: SentimentSummary,
    pub reflective_level: ReflectiveLevel,
    pub topics: Vec<TopicSummary>,
    pub language: LanguageCode,
}

impl TextProfile {
    pub fn sentence_count(&self) -> usize {
        self.gibbs_histogram.values().sum()
    }

    pub fn coverage(&self, phase: GibbsPhase) -> f64 {
        self.gibbs_coverage.get(&phase).copied().unwrap_or(0.0)
    }

    pub fn well_thought_topics(&self) -> impl Iterator<Item = &TopicSummary> {
        self.topics.iter().filter(|t| t.well_thought)
    }

    /// Phase with the highest coverage among those not flagged as least
    /// present; ties keep declaration order.
    pub fn strongest_phase(&self) -> GibbsPhase {
        let weakest = super::least_present_phases(self);
        let mut candidates = GibbsPhase::ALL.iter().copied().filter(|p| !weakest.contains(p));
        let first = candidates.next().unwrap_or(GibbsPhase::Description);
        candidates.fold(first, |best, p| {
            if self.coverage(p) > self.coverage(best) {
                p
            } else {
                best
            }
        })
    }
}

pub fn build_profile(
    doc: &AnalyzedDocument,
    linguistic: LinguisticProfile,
    config: &ReasonerConfig,
) -> Result<TextProfile, ReasonerError> {
    if doc.sentences.is_empty() || doc.analyses.len() != doc.sentences.len() {
        return Err(ReasonerError::EmptyDocument);
    }
    let reflective_level = doc.level.ok_or(ReasonerError::MissingLevel)?;
    let n = doc.analyses.len();

    let mut gibbs_histogram: BTreeMap<GibbsPhase, usize> =
        GibbsPhase::ALL.iter().map(|p| (*p, 0)).collect();
    let mut present: BTreeMap<GibbsPhase, usize> = gibbs_histogram.clone();
    for analysis in &doc.analyses {
        *gibbs_histogram.entry(analysis.gibbs.argmax()).or_insert(0) += 1;
        let phases = match config.gibbs_presence {
            GibbsPresence::Top1 => analysis.gibbs.top_k(1),
            GibbsPresence::AnyOfTop3 => analysis.gibbs.top_k(3),
        };
        for phase in phases {
            *present.entry(phase).or_insert(0) += 1;
        }
    }
    let gibbs_coverage = present
        .into_iter()
        .map(|(p, c)| (p, c as f64 / n as f64))
        .collect();

    let mut emotions_present = BTreeMap::new();
    for label in doc.analyses.iter().flat_map(|a| a.emotions.labels.iter()) {
        if *label != EmotionLabel::NoEmotion {
            *emotions_present.entry(*label).or_insert(0) += 1;
        }
    }

    Ok(TextProfile {
        linguistic,
        gibbs_histogram,
        gibbs_coverage,
        sentiment_summary: summarize_sentiment(doc, &emotions_present, config),
        emotions_present,
        reflective_level,
        topics: summarize_topics(doc),
        language: doc.language.clone(),
    })
}

/// Positive and negative signals are non-neutral sentence polarities plus
/// emotions from the configured partition; emotions outside both sets
/// carry no signal.
fn summarize_sentiment(
    doc: &AnalyzedDocument,
    emotions: &BTreeMap<EmotionLabel, usize>,
    config: &ReasonerConfig,
) -> SentimentSummary {
    let polarity = |wanted| doc.analyses.iter().filter(|a| a.sentiment == wanted).count();
    let emotion_count = |set: &std::collections::BTreeSet<EmotionLabel>| {
        emotions
            .iter()
            .filter(|(l, _)| set.contains(l))
            .map(|(_, c)| c)
            .sum::<usize>()
    };
    let positive = polarity(SentimentPolarity::Positive) + emotion_count(&config.positive_emotions);
    let negative = polarity(SentimentPolarity::Negative) + emotion_count(&config.negative_emotions);
    match (positive > 0, negative > 0) {
        (false, false) => SentimentSummary::AllNeutral,
        (true, false) => SentimentSummary::AllPositive,
        (false, true) => SentimentSummary::AllNegative,
        (true, true) => SentimentSummary::Mixed,
    }
}

fn summarize_topics(doc: &AnalyzedDocument) -> Vec<TopicSummary> {
    let mut by_id: BTreeMap<usize, TopicSummary> = BTreeMap::new();
    for analysis in &doc.analyses {
        let (Some(id), Some(name)) = (analysis.topic.topic_id, &analysis.topic.topic) else {
            continue;
        };
        let entry = by_id.entry(id).or_insert_with(|| TopicSummary {
            clustering_id: analysis.topic.clustering_id,
            topic_id: id,
            topic: name.clone(),
            matched_terms: Vec::new(),
            sentence_count: 0,
            analysis_sentence_count: 0,
            well_thought: false,
        });
        entry.sentence_count += 1;
        if analysis.gibbs.argmax() == GibbsPhase::Analysis {
            entry.analysis_sentence_count += 1;
        }
        for term in &analysis.topic.matched_terms {
            if !entry.matched_terms.contains(term) {
                entry.matched_terms.push(term.clone());
            }
        }
    }
    by_id
        .into_values()
        .map(|mut t| {
            t.well_thought = t.analysis_sentence_count > WELL_THOUGHT_MIN_EXCLUSIVE;
            t
        })
        .collect()
}
