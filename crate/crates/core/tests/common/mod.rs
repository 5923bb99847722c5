#![allow(dead_code)]

use std::collections::BTreeMap;

use reflector::classifiers::{
    ClusteringId, EmotionLabel, EmotionPrediction, GibbsDistribution, GibbsPhase,
    ReflectiveLevel, SentimentPolarity, TopicAssignment,
};
use reflector::document::{AnalyzedDocument, SentenceAnalysis};
use reflector::lingscore::{ClauseType, LinguisticProfile};
use reflector::textproc::{Sentence, Span};
use reflector::LanguageCode;

/// A linguistic profile that triggers none of the default rules.
pub fn rich_linguistics() -> LinguisticProfile {
    LinguisticProfile {
        token_count: 150,
        sentence_count: 10,
        mean_sentence_length: 15.0,
        adverb_verb_ratio: 0.5,
        adjective_noun_ratio: 0.5,
        adverb_verb_undefined: false,
        adjective_noun_undefined: false,
        simple_sentence_count: 4,
        complex_sentence_count: 6,
        subordinate_clause_counts: ClauseType::ALL.iter().map(|c| (*c, 1)).collect(),
        connector_count: 6,
        connector_density: 0.6,
        lexical_variability: 0.7,
    }
}

#[derive(Debug, Clone)]
pub struct SentenceSpec {
    pub phase: GibbsPhase,
    pub sentiment: SentimentPolarity,
    pub emotions: Vec<EmotionLabel>,
    pub topic: Option<usize>,
}

impl SentenceSpec {
    pub fn phase(phase: GibbsPhase) -> Self {
        SentenceSpec {
            phase,
            sentiment: SentimentPolarity::Neutral,
            emotions: vec![],
            topic: None,
        }
    }
}

pub fn document(specs: &[SentenceSpec], level: ReflectiveLevel) -> AnalyzedDocument {
    let mut text = String::new();
    let mut sentences = Vec::new();
    let mut analyses = Vec::new();
    for (index, spec) in specs.iter().enumerate() {
        let start = text.len();
        text.push_str("Satz. ");
        sentences.push(Sentence { index, span: Span::new(start, start + 5), tokens: vec![] });
        let emotions = if spec.emotions.is_empty() {
            EmotionPrediction::no_emotion()
        } else {
            let scores: BTreeMap<EmotionLabel, f64> =
                spec.emotions.iter().map(|e| (*e, 1.0)).collect();
            EmotionPrediction { labels: spec.emotions.iter().copied().collect(), scores, threshold: 0.5 }
        };
        let topic = match spec.topic {
            Some(id) => TopicAssignment {
                clustering_id: ClusteringId::PedagogySpecific,
                topic_id: Some(id),
                topic: Some(format!("topic {id}")),
                matched_terms: vec![format!("term{id}")],
            },
            None => TopicAssignment::none(ClusteringId::PedagogySpecific),
        };
        analyses.push(SentenceAnalysis {
            emotions,
            gibbs: GibbsDistribution::certain(spec.phase),
            sentiment: spec.sentiment,
            topic,
        });
    }
    AnalyzedDocument {
        text,
        language: LanguageCode::De,
        clustering: ClusteringId::PedagogySpecific,
        sentences,
        analyses,
        level: Some(level),
    }
}

/// Document with `counts[i]` sentences in phase `GibbsPhase::ALL[i]`.
pub fn histogram_document(counts: [usize; 6], level: ReflectiveLevel) -> AnalyzedDocument {
    let specs: Vec<SentenceSpec> = GibbsPhase::ALL
        .iter()
        .zip(counts)
        .flat_map(|(p, n)| (0..n).map(move |_| SentenceSpec::phase(*p)))
        .collect();
    document(&specs, level)
}
