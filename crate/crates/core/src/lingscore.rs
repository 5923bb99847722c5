//! Surface linguistic profile: length, expressivity, variability and
//! clause structure.
//!
//! Clause complexity comes from lexicons rather than a parser: a sentence
//! is complex when it holds a subordinating conjunction or at least two
//! verbal tokens, and each subordinator's clause type is its category in
//! the connective lexicon.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::lang::{LanguageCode, PerLanguage};
use crate::lexicon::{rows, DataSource, LexiconError};
use crate::textproc::{PosTag, Sentence, Token};

#[derive(Debug, thiserror::Error)]
pub enum LingError {
    #[error("document has no sentences or a sentence without tokens")]
    EmptyDocument,
    #[error("no connective lexicon for language {0}")]
    MissingLexicon(LanguageCode),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClauseType {
    Causal,
    Temporal,
    Conditional,
    Concessive,
    Relative,
    Complement,
    Other,
}

impl ClauseType {
    pub const ALL: [ClauseType; 7] = [
        ClauseType::Causal,
        ClauseType::Temporal,
        ClauseType::Conditional,
        ClauseType::Concessive,
        ClauseType::Relative,
        ClauseType::Complement,
        ClauseType::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClauseType::Causal => "causal",
            ClauseType::Temporal => "temporal",
            ClauseType::Conditional => "conditional",
            ClauseType::Concessive => "concessive",
            ClauseType::Relative => "relative",
            ClauseType::Complement => "complement",
            ClauseType::Other => "other",
        }
    }
}

impl FromStr for ClauseType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ClauseType::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown clause type {s:?}"))
    }
}

impl fmt::Display for ClauseType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Discourse connectives in `connective<TAB>category` form; multi-word
/// entries are space-separated.
#[derive(Debug, Clone, Default)]
pub struct ConnectorLexicon {
    /// Keyed by first word; candidates sorted longest first.
    by_head: HashMap<String, Vec<(Vec<String>, ClauseType)>>,
}

impl ConnectorLexicon {
    pub fn parse(file: &str, text: &str) -> Result<Self, LexiconError> {
        let mut by_head: HashMap<String, Vec<(Vec<String>, ClauseType)>> = HashMap::new();
        for (line, cols) in rows(text) {
            let category = cols
                .get(1)
                .and_then(|c| c.parse::<ClauseType>().ok())
                .ok_or_else(|| LexiconError::Malformed {
                    file: file.to_string(),
                    line,
                    message: "expected connective<TAB>category".into(),
                })?;
            let words: Vec<String> = cols[0].split_whitespace().map(str::to_lowercase).collect();
            if let Some(head) = words.first() {
                by_head.entry(head.clone()).or_default().push((words, category));
            }
        }
        for candidates in by_head.values_mut() {
            candidates.sort_by_key(|c| std::cmp::Reverse(c.0.len()));
        }
        Ok(ConnectorLexicon { by_head })
    }

    /// Category of a single-word connective.
    pub fn category(&self, lemma: &str) -> Option<ClauseType> {
        self.by_head
            .get(lemma)?
            .iter()
            .find(|(words, _)| words.len() == 1)
            .map(|(_, c)| *c)
    }

    /// Greedy left-to-right matches as `(token index, length, category)`.
    pub fn matches(&self, tokens: &[Token]) -> Vec<(usize, usize, ClauseType)> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < tokens.len() {
            let hit = self.by_head.get(&tokens[i].lemma).and_then(|candidates| {
                candidates.iter().find(|(words, _)| {
                    i + words.len() <= tokens.len()
                        && words
                            .iter()
                            .zip(&tokens[i..])
                            .all(|(w, t)| *w == t.lemma)
                })
            });
            match hit {
                Some((words, category)) => {
                    out.push((i, words.len(), *category));
                    i += words.len();
                }
                None => i += 1,
            }
        }
        out
    }
}

/// Connective lexicons for every native language.
#[derive(Debug, Clone)]
pub struct ConnectorLexicons(PerLanguage<ConnectorLexicon>);

impl ConnectorLexicons {
    pub fn load(src: &DataSource) -> Result<Self, LexiconError> {
        PerLanguage::try_build(|lang| {
            let name = format!("connectives.{lang}.tsv");
            ConnectorLexicon::parse(&name, &src.read(&name)?)
        })
        .map(ConnectorLexicons)
    }

    pub fn for_language(&self, lang: &LanguageCode) -> Result<&ConnectorLexicon, LingError> {
        self.0
            .get(lang)
            .ok_or_else(|| LingError::MissingLexicon(lang.clone()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Complexity {
    Simple,
    Complex,
}

/// Complex iff the sentence holds a subordinator or two or more verbal
/// tokens. Clause types come from each subordinator's lexicon category.
pub fn classify_sentence_complexity(
    sentence: &Sentence,
    lexicon: &ConnectorLexicon,
) -> (Complexity, Vec<ClauseType>) {
    let clauses: Vec<ClauseType> = sentence
        .tokens
        .iter()
        .filter(|t| t.pos == PosTag::ConjSubord)
        .map(|t| lexicon.category(&t.lemma).unwrap_or(ClauseType::Other))
        .collect();
    let verbs = sentence.count_pos(PosTag::is_verbal);
    let complexity = if !clauses.is_empty() || verbs >= 2 {
        Complexity::Complex
    } else {
        Complexity::Simple
    };
    (complexity, clauses)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ConnectorCount {
    pub total: usize,
    pub by_category: BTreeMap<ClauseType, usize>,
}

pub fn count_connectors(sentences: &[Sentence], lexicon: &ConnectorLexicon) -> ConnectorCount {
    let mut count = ConnectorCount::default();
    for sentence in sentences {
        for (_, _, category) in lexicon.matches(&sentence.tokens) {
            count.total += 1;
            *count.by_category.entry(category).or_insert(0) += 1;
        }
    }
    count
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinguisticProfile {
    /// Non-punctuation tokens.
    pub token_count: usize,
    pub sentence_count: usize,
    pub mean_sentence_length: f64,
    pub adverb_verb_ratio: f64,
    pub adjective_noun_ratio: f64,
    /// Set when the document has no verbal tokens.
    pub adverb_verb_undefined: bool,
    /// Set when the document has no nouns.
    pub adjective_noun_undefined: bool,
    pub simple_sentence_count: usize,
    pub complex_sentence_count: usize,
    pub subordinate_clause_counts: BTreeMap<ClauseType, usize>,
    pub connector_count: usize,
    pub connector_density: f64,
    /// Lemma type/token ratio.
    pub lexical_variability: f64,
}

impl LinguisticProfile {
    pub fn undefined_ratio(&self) -> bool {
        self.adverb_verb_undefined || self.adjective_noun_undefined
    }
}

fn ratio(numerator: usize, denominator: usize) -> (f64, bool) {
    if denominator == 0 {
        (0.0, true)
    } else {
        (numerator as f64 / denominator as f64, false)
    }
}

pub fn score_document(
    sentences: &[Sentence],
    lexicon: &ConnectorLexicon,
) -> Result<LinguisticProfile, LingError> {
    if sentences.is_empty() || sentences.iter().any(|s| s.tokens.is_empty()) {
        return Err(LingError::EmptyDocument);
    }
    let tokens = || sentences.iter().flat_map(|s| s.tokens.iter());
    let count = |pred: fn(PosTag) -> bool| tokens().filter(|t| pred(t.pos)).count();

    let token_count = tokens().filter(|t| t.is_word()).count();
    let sentence_count = sentences.len();
    let (adverb_verb_ratio, adverb_verb_undefined) =
        ratio(count(|p| p == PosTag::Adv), count(PosTag::is_verbal));
    let (adjective_noun_ratio, adjective_noun_undefined) =
        ratio(count(|p| p == PosTag::Adj), count(|p| p == PosTag::Noun));

    let mut subordinate_clause_counts: BTreeMap<ClauseType, usize> =
        ClauseType::ALL.iter().map(|c| (*c, 0)).collect();
    let mut complex_sentence_count = 0;
    for sentence in sentences {
        let (complexity, clauses) = classify_sentence_complexity(sentence, lexicon);
        if complexity == Complexity::Complex {
            complex_sentence_count += 1;
        }
        for clause in clauses {
            *subordinate_clause_counts.entry(clause).or_insert(0) += 1;
        }
    }

    let connectors = count_connectors(sentences, lexicon);
    let lemmas: Vec<&str> = if token_count > 0 {
        tokens().filter(|t| t.is_word()).map(|t| t.lemma.as_str()).collect()
    } else {
        tokens().map(|t| t.lemma.as_str()).collect()
    };
    let distinct: HashSet<&str> = lemmas.iter().copied().collect();

    Ok(LinguisticProfile {
        token_count,
        sentence_count,
        mean_sentence_length: token_count as f64 / sentence_count as f64,
        adverb_verb_ratio,
        adjective_noun_ratio,
        adverb_verb_undefined,
        adjective_noun_undefined,
        simple_sentence_count: sentence_count - complex_sentence_count,
        complex_sentence_count,
        subordinate_clause_counts,
        connector_count: connectors.total,
        connector_density: connectors.total as f64 / sentence_count as f64,
        lexical_variability: distinct.len() as f64 / lemmas.len() as f64,
    })
}
