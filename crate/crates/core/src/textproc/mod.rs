//! Language identification, sentence segmentation, tokenization and
//! part-of-speech tagging, plus the translation port.

mod langid;
mod segment;
mod tagger;
mod translate;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::lang::LanguageCode;
use crate::lexicon::{word_list, DataSource, LexiconError};

pub use langid::LanguageIdentifier;
pub use segment::segment_sentences;
pub use tagger::{PosLexicon, Tagger};
pub use translate::{
    translate, translate_or_stub, untranslated_marker, StubTranslator, TranslateError,
    TranslatorPort,
};

/// Minimum non-whitespace characters for a usable language guess.
pub const MIN_LANGID_CHARS: usize = 20;

#[derive(Debug, thiserror::Error)]
pub enum TextError {
    #[error("input text is empty")]
    EmptyInput,
    #[error("input has {0} non-whitespace characters, at least {MIN_LANGID_CHARS} are needed")]
    TooShort(usize),
    #[error("unsupported language {0}")]
    UnsupportedLanguage(LanguageCode),
}

/// Half-open byte range `[start, end)` into the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        Span { start, end }
    }

    pub fn slice<'a>(&self, text: &'a str) -> &'a str {
        &text[self.start..self.end]
    }

    pub fn shifted(self, by: usize) -> Span {
        Span::new(self.start + by, self.end + by)
    }

    pub fn contains(&self, other: &Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    /// The same range in Unicode scalar offsets.
    pub fn to_char_span(&self, text: &str) -> Span {
        let start = text[..self.start].chars().count();
        Span::new(start, start + text[self.start..self.end].chars().count())
    }
}

/// Coarse part-of-speech categories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PosTag {
    Noun,
    Verb,
    AuxVerb,
    ModalVerb,
    Adj,
    Adv,
    Pron,
    Det,
    Adp,
    ConjCoord,
    ConjSubord,
    Num,
    Punct,
    Part,
    Other,
}

impl PosTag {
    pub const ALL: [PosTag; 15] = [
        PosTag::Noun,
        PosTag::Verb,
        PosTag::AuxVerb,
        PosTag::ModalVerb,
        PosTag::Adj,
        PosTag::Adv,
        PosTag::Pron,
        PosTag::Det,
        PosTag::Adp,
        PosTag::ConjCoord,
        PosTag::ConjSubord,
        PosTag::Num,
        PosTag::Punct,
        PosTag::Part,
        PosTag::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PosTag::Noun => "NOUN",
            PosTag::Verb => "VERB",
            PosTag::AuxVerb => "AUX_VERB",
            PosTag::ModalVerb => "MODAL_VERB",
            PosTag::Adj => "ADJ",
            PosTag::Adv => "ADV",
            PosTag::Pron => "PRON",
            PosTag::Det => "DET",
            PosTag::Adp => "ADP",
            PosTag::ConjCoord => "CONJ_COORD",
            PosTag::ConjSubord => "CONJ_SUBORD",
            PosTag::Num => "NUM",
            PosTag::Punct => "PUNCT",
            PosTag::Part => "PART",
            PosTag::Other => "OTHER",
        }
    }

    /// Verbal tags counted as finite verbs by the clause heuristics.
    pub fn is_verbal(self) -> bool {
        matches!(self, PosTag::Verb | PosTag::AuxVerb | PosTag::ModalVerb)
    }
}

impl FromStr for PosTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PosTag::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| format!("unknown POS tag {s:?}"))
    }
}

impl fmt::Display for PosTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    /// Lowercased surface form.
    pub lemma: String,
    pub pos: PosTag,
    pub span: Span,
}

impl Token {
    pub fn is_word(&self) -> bool {
        !matches!(self.pos, PosTag::Punct)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sentence {
    pub index: usize,
    pub span: Span,
    pub tokens: Vec<Token>,
}

impl Sentence {
    pub fn words(&self) -> impl Iterator<Item = &Token> {
        self.tokens.iter().filter(|t| t.is_word())
    }

    pub fn count_pos(&self, pred: impl Fn(PosTag) -> bool) -> usize {
        self.tokens.iter().filter(|t| pred(t.pos)).count()
    }
}

/// Segmenter, tagger and language identifier over lexicons loaded once.
#[derive(Debug, Clone)]
pub struct TextProcessor {
    identifier: LanguageIdentifier,
    tagger: Tagger,
    abbreviations: HashSet<String>,
}

impl TextProcessor {
    pub fn load(src: &DataSource) -> Result<Self, LexiconError> {
        let mut abbreviations = HashSet::new();
        for lang in LanguageCode::NATIVE {
            abbreviations.extend(word_list(&src.read(&format!("abbrev.{lang}.txt"))?));
        }
        Ok(TextProcessor {
            identifier: LanguageIdentifier::load(src)?,
            tagger: Tagger::load(src, abbreviations.clone())?,
            abbreviations,
        })
    }

    pub fn identifier(&self) -> &LanguageIdentifier {
        &self.identifier
    }

    pub fn detect_language(&self, text: &str) -> Result<(LanguageCode, f64), TextError> {
        self.identifier.detect(text)
    }

    /// Sentence spans only; tokens are left empty.
    pub fn segment_sentences(&self, text: &str) -> Result<Vec<Sentence>, TextError> {
        segment_sentences(text, &self.abbreviations)
    }

    pub fn tokenize_and_tag(
        &self,
        sentence_text: &str,
        lang: &LanguageCode,
    ) -> Result<Vec<Token>, TextError> {
        self.tagger.tag(sentence_text, lang)
    }

    /// Segments and tags a whole text; token spans are absolute.
    pub fn analyze(&self, text: &str, lang: &LanguageCode) -> Result<Vec<Sentence>, TextError> {
        let mut sentences = self.segment_sentences(text)?;
        for sentence in &mut sentences {
            let offset = sentence.span.start;
            sentence.tokens = self
                .tagger
                .tag(sentence.span.slice(text), lang)?
                .into_iter()
                .map(|mut t| {
                    t.span = t.span.shifted(offset);
                    t
                })
                .collect();
        }
        Ok(sentences)
    }
}
