use super::{lexicon_for, load_cues, ClassifierError, SentimentClassifier, SentimentCue, SentimentPolarity};
use crate::lang::{LanguageCode, PerLanguage};
use crate::lexicon::{CueLexicon, DataSource, LexiconError};
use crate::textproc::Sentence;

/// Polarity lexicon with negation: a negator among the three words before a
/// cue flips that cue's sign.
#[derive(Debug, Clone)]
pub struct LexiconSentimentClassifier {
    lexicons: PerLanguage<CueLexicon<SentimentCue>>,
}

pub(crate) const NEGATION_WINDOW: usize = 3;

impl LexiconSentimentClassifier {
    pub fn load(src: &DataSource) -> Result<Self, LexiconError> {
        Ok(LexiconSentimentClassifier {
            lexicons: load_cues(src, "sentiment")?,
        })
    }
}

impl SentimentClassifier for LexiconSentimentClassifier {
    fn predict_sentiment(
        &self,
        sentence: &Sentence,
        lang: &LanguageCode,
    ) -> Result<SentimentPolarity, ClassifierError> {
        if sentence.tokens.is_empty() {
            return Err(ClassifierError::EmptySentence);
        }
        let lexicon = lexicon_for(&self.lexicons, "sentiment", lang)?;
        let words: Vec<&str> = sentence.words().map(|t| t.lemma.as_str()).collect();
        let is_negator =
            |w: &str| lexicon.lookup(w).any(|(cue, _)| *cue == SentimentCue::Negator);
        let mut balance = 0.0;
        for (i, word) in words.iter().enumerate() {
            let negated = words[i.saturating_sub(NEGATION_WINDOW)..i]
                .iter()
                .any(|w| is_negator(w));
            for (cue, weight) in lexicon.lookup(word) {
                let sign = match cue {
                    SentimentCue::Positive => 1.0,
                    SentimentCue::Negative => -1.0,
                    SentimentCue::Negator => continue,
                };
                balance += if negated { -sign * weight } else { sign * weight };
            }
        }
        Ok(if balance > 0.0 {
            SentimentPolarity::Positive
        } else if balance < 0.0 {
            SentimentPolarity::Negative
        } else {
            SentimentPolarity::Neutral
        })
    }
}
