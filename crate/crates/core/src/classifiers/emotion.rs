use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{lexicon_for, load_cues, ClassifierError, EmotionClassifier, EmotionLabel};
use crate::lang::{LanguageCode, PerLanguage};
use crate::lexicon::{CueLexicon, DataSource, LexiconError};
use crate::textproc::Sentence;

/// Labels above threshold with their scores. `no-emotion` is exclusive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmotionPrediction {
    pub labels: BTreeSet<EmotionLabel>,
    pub scores: BTreeMap<EmotionLabel, f64>,
    pub threshold: f64,
}

impl EmotionPrediction {
    pub fn no_emotion() -> Self {
        EmotionPrediction {
            labels: BTreeSet::from([EmotionLabel::NoEmotion]),
            scores: BTreeMap::from([(EmotionLabel::NoEmotion, 1.0)]),
            threshold: 1.0,
        }
    }

    /// Thresholds `scores`, falling back to `no-emotion` when nothing passes.
    pub fn from_scores(scores: BTreeMap<EmotionLabel, f64>, threshold: f64) -> Self {
        let labels: BTreeSet<EmotionLabel> = scores
            .iter()
            .filter(|(l, s)| **l != EmotionLabel::NoEmotion && **s > 0.0 && **s >= threshold)
            .map(|(l, _)| *l)
            .collect();
        if labels.is_empty() {
            return Self::no_emotion();
        }
        EmotionPrediction {
            labels,
            scores,
            threshold,
        }
    }

    pub fn is_no_emotion(&self) -> bool {
        self.labels.contains(&EmotionLabel::NoEmotion)
    }
}

/// Scores each label by its share of the sentence's cue weight and keeps
/// labels reaching `relative_threshold` of the best score.
#[derive(Debug, Clone)]
pub struct LexiconEmotionClassifier {
    lexicons: PerLanguage<CueLexicon<EmotionLabel>>,
    relative_threshold: f64,
}

impl LexiconEmotionClassifier {
    pub const DEFAULT_RELATIVE_THRESHOLD: f64 = 0.5;

    pub fn load(src: &DataSource) -> Result<Self, LexiconError> {
        Ok(LexiconEmotionClassifier {
            lexicons: load_cues(src, "emotions")?,
            relative_threshold: Self::DEFAULT_RELATIVE_THRESHOLD,
        })
    }

    pub fn with_relative_threshold(mut self, threshold: f64) -> Self {
        self.relative_threshold = threshold;
        self
    }

    /// Summed cue weight per label.
    pub(crate) fn raw_scores(
        &self,
        sentence: &Sentence,
        lang: &LanguageCode,
    ) -> Result<BTreeMap<EmotionLabel, f64>, ClassifierError> {
        let lexicon = lexicon_for(&self.lexicons, "emotion", lang)?;
        let mut raw = BTreeMap::new();
        for token in sentence.words() {
            for (label, weight) in lexicon.lookup(&token.lemma) {
                *raw.entry(*label).or_insert(0.0) += weight;
            }
        }
        Ok(raw)
    }
}

impl EmotionClassifier for LexiconEmotionClassifier {
    fn predict_emotions(
        &self,
        sentence: &Sentence,
        lang: &LanguageCode,
    ) -> Result<EmotionPrediction, ClassifierError> {
        if sentence.tokens.is_empty() {
            return Err(ClassifierError::EmptySentence);
        }
        let raw = self.raw_scores(sentence, lang)?;
        let total: f64 = raw.values().sum();
        if total <= 0.0 {
            return Ok(EmotionPrediction::no_emotion());
        }
        let scores: BTreeMap<EmotionLabel, f64> = raw
            .into_iter()
            .map(|(l, w)| (l, (w / total).clamp(0.0, 1.0)))
            .collect();
        let max = scores.values().copied().fold(0.0, f64::max);
        Ok(EmotionPrediction::from_scores(scores, self.relative_threshold * max))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textproc::TextProcessor;

    fn predict(text: &str) -> EmotionPrediction {
        let src = DataSource::bundled();
        let sentences = TextProcessor::load(&src).unwrap().analyze(text, &LanguageCode::De).unwrap();
        LexiconEmotionClassifier::load(&src)
            .unwrap()
            .predict_emotions(&sentences[0], &LanguageCode::De)
            .unwrap()
    }

    #[test]
    fn satisfaction_cue() {
        let p = predict("Ich bin sehr zufrieden mit meiner Stunde.");
        assert!(p.labels.contains(&EmotionLabel::Satisfaction));
    }

    #[test]
    fn no_cues_fall_back_to_no_emotion() {
        let p = predict("Der Stuhl ist blau.");
        assert_eq!(p.labels, BTreeSet::from([EmotionLabel::NoEmotion]));
    }

    #[test]
    fn two_cues_both_pass_threshold() {
        let p = predict("Ich bin unsicher, aber motiviert.");
        assert!(p.labels.contains(&EmotionLabel::Insecurity));
        assert!(p.labels.contains(&EmotionLabel::Motivation));
        assert!(!p.is_no_emotion());
    }

    #[test]
    fn labels_match_thresholded_scores() {
        let p = predict("Ich war überrascht und etwas enttäuscht, aber sehr interessiert und neugierig.");
        let expected: BTreeSet<_> = p
            .scores
            .iter()
            .filter(|(_, s)| **s >= p.threshold)
            .map(|(l, _)| *l)
            .collect();
        assert_eq!(p.labels, expected);
        assert!(p.scores.values().all(|s| (0.0..=1.0).contains(s)));
        assert!(p.labels.contains(&EmotionLabel::Interest));
    }

    #[test]
    fn empty_sentence_is_rejected() {
        let s = Sentence {
            index: 0,
            span: crate::textproc::Span::new(0, 0),
            tokens: vec![],
        };
        let c = LexiconEmotionClassifier::load(&DataSource::bundled()).unwrap();
        assert_eq!(
            c.predict_emotions(&s, &LanguageCode::De),
            Err(ClassifierError::EmptySentence)
        );
    }
}
