//! Character-trigram language identification.
//!
//! Each language profile is a trigram frequency table built from a bundled
//! training text. A document is scored by its add-one smoothed
//! log-likelihood under every profile; the confidence is the posterior
//! probability of the winner under a uniform prior.

use std::collections::HashMap;

use super::{TextError, MIN_LANGID_CHARS};
use crate::lang::LanguageCode;
use crate::lexicon::{DataSource, LexiconError};

type Trigram = [char; 3];

/// Languages with a bundled training text, in tie-breaking order.
const PROFILED: [&str; 5] = ["de", "en", "es", "fr", "it"];

#[derive(Debug, Clone)]
struct Profile {
    lang: LanguageCode,
    counts: HashMap<Trigram, u32>,
    total: u64,
}

#[derive(Debug, Clone)]
pub struct LanguageIdentifier {
    profiles: Vec<Profile>,
    vocabulary: usize,
}

/// Trigrams of each alphabetic word padded with one space on either side.
fn trigrams(text: &str) -> Vec<Trigram> {
    let lower = text.to_lowercase();
    let mut out = Vec::new();
    for word in lower.split(|c: char| !c.is_alphabetic()).filter(|w| !w.is_empty()) {
        let padded: Vec<char> = std::iter::once(' ')
            .chain(word.chars())
            .chain(std::iter::once(' '))
            .collect();
        out.extend(padded.windows(3).map(|w| [w[0], w[1], w[2]]));
    }
    out
}

impl LanguageIdentifier {
    pub fn load(src: &DataSource) -> Result<Self, LexiconError> {
        let corpora = PROFILED
            .iter()
            .map(|tag| {
                let text = src.read(&format!("langid/{tag}.txt"))?;
                let lang: LanguageCode = tag.parse().expect("profiled tags are valid");
                Ok((lang, text.into_owned()))
            })
            .collect::<Result<Vec<_>, LexiconError>>()?;
        Ok(Self::train(corpora.iter().map(|(l, t)| (l.clone(), t.as_str()))))
    }

    pub fn train<'a>(corpora: impl IntoIterator<Item = (LanguageCode, &'a str)>) -> Self {
        let mut seen = std::collections::HashSet::new();
        let profiles: Vec<Profile> = corpora
            .into_iter()
            .map(|(lang, text)| {
                let mut counts = HashMap::new();
                let grams = trigrams(text);
                for g in &grams {
                    *counts.entry(*g).or_insert(0) += 1;
                    seen.insert(*g);
                }
                Profile {
                    lang,
                    counts,
                    total: grams.len() as u64,
                }
            })
            .collect();
        LanguageIdentifier {
            profiles,
            // one extra slot for trigrams never seen in training
            vocabulary: seen.len() + 1,
        }
    }

    pub fn languages(&self) -> impl Iterator<Item = &LanguageCode> {
        self.profiles.iter().map(|p| &p.lang)
    }

    /// Log-likelihood of `text` under every profile, in profile order.
    pub fn scores(&self, text: &str) -> Vec<(LanguageCode, f64)> {
        let grams = trigrams(text);
        self.profiles
            .iter()
            .map(|p| {
                let denom = (p.total + self.vocabulary as u64) as f64;
                let ll = grams
                    .iter()
                    .map(|g| ((p.counts.get(g).copied().unwrap_or(0) + 1) as f64 / denom).ln())
                    .sum();
                (p.lang.clone(), ll)
            })
            .collect()
    }

    pub fn detect(&self, text: &str) -> Result<(LanguageCode, f64), TextError> {
        let visible = text.chars().filter(|c| !c.is_whitespace()).count();
        if visible == 0 {
            return Err(TextError::EmptyInput);
        }
        if visible < MIN_LANGID_CHARS {
            return Err(TextError::TooShort(visible));
        }
        let scores = self.scores(text);
        let (best_idx, best) = scores
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |(bi, bs), (i, (_, s))| {
                if *s > bs {
                    (i, *s)
                } else {
                    (bi, bs)
                }
            });
        let partition: f64 = scores.iter().map(|(_, s)| (s - best).exp()).sum();
        Ok((scores[best_idx].0.clone(), 1.0 / partition))
    }
}
