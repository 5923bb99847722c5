use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{
    lexicon_for, load_cues, ClassifierError, EmotionLabel, GibbsClassifier, GibbsPhase,
    LexiconEmotionClassifier,
};
use crate::lang::{LanguageCode, PerLanguage};
use crate::lexicon::{CueLexicon, DataSource, LexiconError};
use crate::textproc::Sentence;

/// Additive smoothing applied to every phase before normalization.
pub const GIBBS_SMOOTHING: f64 = 0.01;

/// Probability per phase, in phase declaration order.
#[derive(Debug, Clone, PartialEq)]
pub struct GibbsDistribution {
    probabilities: [f64; 6],
}

impl GibbsDistribution {
    /// Normalizes non-negative weights. Returns `None` if they sum to zero
    /// or any is negative or non-finite.
    pub fn from_weights(weights: [f64; 6]) -> Option<Self> {
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return None;
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return None;
        }
        Some(GibbsDistribution {
            probabilities: weights.map(|w| w / total),
        })
    }

    /// All mass on one phase.
    pub fn certain(phase: GibbsPhase) -> Self {
        let mut weights = [0.0; 6];
        weights[phase.index()] = 1.0;
        GibbsDistribution {
            probabilities: weights,
        }
    }

    pub fn probability(&self, phase: GibbsPhase) -> f64 {
        self.probabilities[phase.index()]
    }

    pub fn probabilities(&self) -> &[f64; 6] {
        &self.probabilities
    }

    /// The `k` most probable phases; ties keep declaration order.
    pub fn top_k(&self, k: usize) -> Vec<GibbsPhase> {
        let mut phases = GibbsPhase::ALL.to_vec();
        phases.sort_by(|a, b| self.probability(*b).total_cmp(&self.probability(*a)));
        phases.truncate(k);
        phases
    }

    pub fn argmax(&self) -> GibbsPhase {
        self.top_k(1)[0]
    }
}

impl Serialize for GibbsDistribution {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let map: BTreeMap<GibbsPhase, f64> = GibbsPhase::ALL
            .iter()
            .map(|p| (*p, self.probability(*p)))
            .collect();
        map.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GibbsDistribution {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let map = BTreeMap::<GibbsPhase, f64>::deserialize(deserializer)?;
        let mut weights = [0.0; 6];
        for (phase, p) in map {
            weights[phase.index()] = p;
        }
        GibbsDistribution::from_weights(weights)
            .ok_or_else(|| serde::de::Error::custom("invalid Gibbs distribution"))
    }
}

/// Cue-lexicon phase scorer. Emotion cues count towards `feelings`; a small
/// prior on `description` makes cue-free sentences peak there.
#[derive(Debug, Clone)]
pub struct LexiconGibbsClassifier {
    lexicons: PerLanguage<CueLexicon<GibbsPhase>>,
    emotions: LexiconEmotionClassifier,
    description_prior: f64,
}

impl LexiconGibbsClassifier {
    pub const DEFAULT_DESCRIPTION_PRIOR: f64 = 0.5;

    pub fn load(src: &DataSource, emotions: LexiconEmotionClassifier) -> Result<Self, LexiconError> {
        Ok(LexiconGibbsClassifier {
            lexicons: load_cues(src, "gibbs")?,
            emotions,
            description_prior: Self::DEFAULT_DESCRIPTION_PRIOR,
        })
    }
}

impl GibbsClassifier for LexiconGibbsClassifier {
    fn predict_gibbs(
        &self,
        sentence: &Sentence,
        lang: &LanguageCode,
    ) -> Result<GibbsDistribution, ClassifierError> {
        if sentence.tokens.is_empty() {
            return Err(ClassifierError::EmptySentence);
        }
        let lexicon = lexicon_for(&self.lexicons, "gibbs", lang)?;
        let mut weights = [GIBBS_SMOOTHING; 6];
        weights[GibbsPhase::Description.index()] += self.description_prior;
        for token in sentence.words() {
            for (phase, w) in lexicon.lookup(&token.lemma) {
                weights[phase.index()] += w;
            }
        }
        let feelings: f64 = self
            .emotions
            .raw_scores(sentence, lang)?
            .into_iter()
            .filter(|(label, _)| *label != EmotionLabel::Information)
            .map(|(_, w)| w)
            .sum();
        weights[GibbsPhase::Feelings.index()] += feelings;
        Ok(GibbsDistribution::from_weights(weights).expect("smoothed weights are positive"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textproc::TextProcessor;

    fn predict(text: &str) -> GibbsDistribution {
        let src = DataSource::bundled();
        let sentences = TextProcessor::load(&src).unwrap().analyze(text, &LanguageCode::De).unwrap();
        let emotions = LexiconEmotionClassifier::load(&src).unwrap();
        LexiconGibbsClassifier::load(&src, emotions)
            .unwrap()
            .predict_gibbs(&sentences[0], &LanguageCode::De)
            .unwrap()
    }

    #[test]
    fn future_markers_peak_at_future_plans() {
        let d = predict("Nächstes Mal werde ich früher mit der Planung beginnen.");
        assert_eq!(d.argmax(), GibbsPhase::FuturePlans);
    }

    #[test]
    fn cue_free_sentence_peaks_at_description() {
        let d = predict("Der Unterricht begann um acht Uhr im Raum zwölf.");
        assert_eq!(d.argmax(), GibbsPhase::Description);
        assert!(d.probability(GibbsPhase::Description) > d.probability(GibbsPhase::Feelings));
    }

    #[test]
    fn other_cue_families() {
        assert_eq!(predict("Ich fühlte mich sehr nervös.").argmax(), GibbsPhase::Feelings);
        assert_eq!(predict("Das war gut.").argmax(), GibbsPhase::Evaluation);
        assert_eq!(
            predict("Das lag vermutlich daran, dass die Aufgabe zu lang war.").argmax(),
            GibbsPhase::Analysis
        );
        assert_eq!(
            predict("Insgesamt ist mein Fazit, dass ich viel mitnehme.").argmax(),
            GibbsPhase::Conclusion
        );
    }

    #[test]
    fn distribution_is_normalized_and_positive() {
        let d = predict("Heute war ein Tag.");
        let sum: f64 = d.probabilities().iter().sum();
        assert!((sum - 1.0).abs() < 1e-9);
        assert!(d.probabilities().iter().all(|p| *p > 0.0));
    }

    #[test]
    fn top_k_ties_keep_declaration_order() {
        let d = GibbsDistribution::from_weights([1.0; 6]).unwrap();
        assert_eq!(
            d.top_k(3),
            vec![GibbsPhase::Description, GibbsPhase::Feelings, GibbsPhase::Evaluation]
        );
        let d = GibbsDistribution::from_weights([1.0, 2.0, 2.0, 0.5, 2.0, 0.0]).unwrap();
        assert_eq!(
            d.top_k(2),
            vec![GibbsPhase::Feelings, GibbsPhase::Evaluation]
        );
        assert!(d.top_k(3).starts_with(&d.top_k(1)));
    }

    #[test]
    fn serde_round_trip_as_phase_map() {
        let d = GibbsDistribution::from_weights([1.0, 1.0, 2.0, 0.0, 0.0, 0.0]).unwrap();
        let json = serde_json::to_string(&d).unwrap();
        assert!(json.contains("\"evaluation\":0.5"));
        let back: GibbsDistribution = serde_json::from_str(&json).unwrap();
        assert_eq!(back, d);
    }
}
