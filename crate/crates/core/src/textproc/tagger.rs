//! Tokenizer and lexicon-plus-suffix part-of-speech tagger.

use std::collections::{HashMap, HashSet};

use super::{PosTag, Span, TextError, Token};
use crate::lang::{LanguageCode, PerLanguage};
use crate::lexicon::{rows, DataSource, LexiconError};

/// Closed-class lexicon in `surface<TAB>tag` form. The first entry for a
/// surface wins.
#[derive(Debug, Clone, Default)]
pub struct PosLexicon {
    entries: HashMap<String, PosTag>,
}

impl PosLexicon {
    pub fn parse(file: &str, text: &str) -> Result<Self, LexiconError> {
        let mut entries = HashMap::new();
        for (line, cols) in rows(text) {
            let tag = cols
                .get(1)
                .and_then(|t| t.parse::<PosTag>().ok())
                .ok_or_else(|| LexiconError::Malformed {
                    file: file.to_string(),
                    line,
                    message: "expected surface<TAB>tag".into(),
                })?;
            entries.entry(cols[0].to_lowercase()).or_insert(tag);
        }
        Ok(PosLexicon { entries })
    }

    pub fn get(&self, lower: &str) -> Option<PosTag> {
        self.entries.get(lower).copied()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Kind {
    Word,
    Number,
    Abbreviation,
    Punct,
}

#[derive(Debug, Clone)]
pub struct Tagger {
    lexicons: PerLanguage<PosLexicon>,
    /// Longest first, so `z.b.` wins over `z.`.
    abbreviations: Vec<String>,
}

impl Tagger {
    pub fn load(src: &DataSource, abbreviations: HashSet<String>) -> Result<Self, LexiconError> {
        let lexicons = PerLanguage::try_build(|lang| {
            let name = format!("pos.{lang}.tsv");
            PosLexicon::parse(&name, &src.read(&name)?)
        })?;
        let mut abbreviations: Vec<String> = abbreviations.into_iter().collect();
        abbreviations.sort_by(|a, b| b.chars().count().cmp(&a.chars().count()).then(a.cmp(b)));
        Ok(Tagger {
            lexicons,
            abbreviations,
        })
    }

    /// Tokens of `text` with spans relative to it.
    pub fn tag(&self, text: &str, lang: &LanguageCode) -> Result<Vec<Token>, TextError> {
        let lexicon = self
            .lexicons
            .get(lang)
            .ok_or_else(|| TextError::UnsupportedLanguage(lang.clone()))?;
        let mut tokens = Vec::new();
        let mut first_word = true;
        for (span, kind) in self.split(text) {
            let surface = span.slice(text);
            let lemma = surface.to_lowercase();
            let pos = match kind {
                Kind::Punct => PosTag::Punct,
                Kind::Number => PosTag::Num,
                Kind::Abbreviation => PosTag::Other,
                Kind::Word => tag_word(lexicon, lang, surface, &lemma, first_word),
            };
            if kind != Kind::Punct {
                first_word = false;
            }
            tokens.push(Token {
                surface: surface.to_string(),
                lemma,
                pos,
                span,
            });
        }
        Ok(tokens)
    }

    fn split(&self, text: &str) -> Vec<(Span, Kind)> {
        let chars: Vec<(usize, char)> = text.char_indices().collect();
        let byte_at = |i: usize| chars.get(i).map_or(text.len(), |&(b, _)| b);
        let mut out = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i].1;
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if !c.is_alphanumeric() {
                out.push((Span::new(byte_at(i), byte_at(i + 1)), Kind::Punct));
                i += 1;
                continue;
            }
            if let Some(n) = self.abbreviation_at(&chars[i..]) {
                out.push((Span::new(byte_at(i), byte_at(i + n)), Kind::Abbreviation));
                i += n;
                continue;
            }
            let start = i;
            let mut numeric = true;
            while i < chars.len() {
                let c = chars[i].1;
                let next_alnum = chars.get(i + 1).is_some_and(|&(_, n)| n.is_alphanumeric());
                let next_digit = chars.get(i + 1).is_some_and(|&(_, n)| n.is_ascii_digit());
                if c.is_alphanumeric() {
                    numeric &= c.is_ascii_digit();
                    i += 1;
                } else if matches!(c, '-' | '\'' | '’') && next_alnum && i > start {
                    numeric = false;
                    i += 1;
                } else if matches!(c, '.' | ',') && numeric && next_digit && i > start {
                    i += 1;
                } else {
                    break;
                }
            }
            let kind = if numeric { Kind::Number } else { Kind::Word };
            out.push((Span::new(byte_at(start), byte_at(i)), kind));
        }
        out
    }

    /// Length in chars of an abbreviation starting at the head of `rest`.
    fn abbreviation_at(&self, rest: &[(usize, char)]) -> Option<usize> {
        self.abbreviations.iter().find_map(|abbr| {
            let n = abbr.chars().count();
            if rest.len() < n {
                return None;
            }
            let candidate: String = rest[..n].iter().flat_map(|&(_, c)| c.to_lowercase()).collect();
            let boundary = rest.get(n).is_none_or(|&(_, c)| !c.is_alphanumeric());
            (candidate == *abbr && boundary).then_some(n)
        })
    }
}

fn tag_word(
    lexicon: &PosLexicon,
    lang: &LanguageCode,
    surface: &str,
    lower: &str,
    sentence_initial: bool,
) -> PosTag {
    if let Some(tag) = lexicon.get(lower) {
        return tag;
    }
    let capitalized = surface.chars().next().is_some_and(char::is_uppercase);
    match lang {
        LanguageCode::De => {
            if capitalized && !sentence_initial {
                PosTag::Noun
            } else {
                german_suffix(lower).unwrap_or(if capitalized { PosTag::Noun } else { PosTag::Other })
            }
        }
        LanguageCode::En => english_suffix(lower).unwrap_or(PosTag::Other),
        LanguageCode::Es => spanish_suffix(lower).unwrap_or(PosTag::Other),
        LanguageCode::Other(_) => PosTag::Other,
    }
}

fn ends_with_any(word: &str, suffixes: &[&str]) -> bool {
    suffixes
        .iter()
        .any(|s| word.len() > s.len() + 1 && word.ends_with(s))
}

fn german_suffix(w: &str) -> Option<PosTag> {
    const ADV: &[&str] = &["weise", "mals", "wärts", "dings", "falls"];
    const ADJ: &[&str] = &["ig", "lich", "isch", "bar", "sam", "los", "voll", "haft", "iv", "ell", "al"];
    const NOUN: &[&str] = &["ung", "heit", "keit", "schaft", "tion", "ität", "nis"];
    const VERB: &[&str] = &["ieren", "iert", "ierte", "ierten", "en", "ern", "eln", "te", "ten", "test", "st", "t"];
    if ends_with_any(w, ADV) {
        return Some(PosTag::Adv);
    }
    let stem = ["en", "er", "es", "em", "e"]
        .iter()
        .find_map(|infl| w.strip_suffix(infl).filter(|s| ends_with_any(s, ADJ)))
        .unwrap_or(w);
    if ends_with_any(stem, ADJ) {
        return Some(PosTag::Adj);
    }
    if ends_with_any(w, NOUN) {
        return Some(PosTag::Noun);
    }
    if ends_with_any(w, VERB) {
        return Some(PosTag::Verb);
    }
    None
}

fn english_suffix(w: &str) -> Option<PosTag> {
    const NOUN: &[&str] = &["tion", "sion", "ness", "ment", "ity", "ship", "ance", "ence", "ism", "ist", "ers", "er", "or"];
    const ADJ: &[&str] = &["ous", "ful", "ive", "able", "ible", "ical", "al", "ic", "less", "ish"];
    const VERB: &[&str] = &["ed", "ing", "ize", "ise", "ify", "ate"];
    if ends_with_any(w, NOUN) {
        Some(PosTag::Noun)
    } else if ends_with_any(w, &["ly"]) {
        Some(PosTag::Adv)
    } else if ends_with_any(w, ADJ) {
        Some(PosTag::Adj)
    } else if ends_with_any(w, VERB) {
        Some(PosTag::Verb)
    } else {
        None
    }
}

fn spanish_suffix(w: &str) -> Option<PosTag> {
    const NOUN: &[&str] = &["ción", "sión", "dad", "miento", "eza", "ura", "ismo", "aje"];
    const VERB: &[&str] = &[
        "ar", "er", "ir", "ado", "ada", "ados", "adas", "ido", "ida", "idos", "idas", "ando",
        "iendo", "aba", "aban", "amos", "emos", "imos", "aron", "ieron", "é", "ó", "í",
    ];
    const ADJ: &[&str] = &["oso", "osa", "osos", "osas", "ble", "bles", "ivo", "iva", "al", "ante", "ente"];
    if ends_with_any(w, &["mente"]) {
        Some(PosTag::Adv)
    } else if ends_with_any(w, NOUN) {
        Some(PosTag::Noun)
    } else if ends_with_any(w, VERB) {
        Some(PosTag::Verb)
    } else if ends_with_any(w, ADJ) {
        Some(PosTag::Adj)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tagger() -> Tagger {
        let abbrevs = ["dr.", "z.b."].iter().map(|s| s.to_string()).collect();
        Tagger::load(&DataSource::bundled(), abbrevs).unwrap()
    }

    fn tags(text: &str, lang: LanguageCode) -> Vec<(String, PosTag)> {
        tagger()
            .tag(text, &lang)
            .unwrap()
            .into_iter()
            .map(|t| (t.surface, t.pos))
            .collect()
    }

    #[test]
    fn closed_class_lexicon_entries() {
        let t = tags("weil und .", LanguageCode::De);
        assert_eq!(t[0].1, PosTag::ConjSubord);
        assert_eq!(t[1].1, PosTag::ConjCoord);
        assert_eq!(t[2].1, PosTag::Punct);
    }

    #[test]
    fn german_capitalized_unknowns_are_nouns() {
        let t = tags("Heute begann die Planung im Klassenzimmer.", LanguageCode::De);
        let pos: HashMap<_, _> = t.into_iter().collect();
        assert_eq!(pos["Planung"], PosTag::Noun);
        assert_eq!(pos["Klassenzimmer"], PosTag::Noun);
        assert_eq!(pos["Heute"], PosTag::Adv);
    }

    #[test]
    fn suffix_heuristics_for_open_classes() {
        let t = tags("sie arbeiteten freundlich glücklicherweise", LanguageCode::De);
        assert_eq!(t[1].1, PosTag::Verb);
        assert_eq!(t[2].1, PosTag::Adj);
        assert_eq!(t[3].1, PosTag::Adv);
        let t = tags("she quickly finished the explanation", LanguageCode::En);
        assert_eq!(t[1].1, PosTag::Adv);
        assert_eq!(t[2].1, PosTag::Verb);
        assert_eq!(t[4].1, PosTag::Noun);
        let t = tags("explicó rápidamente la situación", LanguageCode::Es);
        assert_eq!(t[0].1, PosTag::Verb);
        assert_eq!(t[1].1, PosTag::Adv);
        assert_eq!(t[3].1, PosTag::Noun);
    }

    #[test]
    fn abbreviations_numbers_and_hyphens_stay_whole() {
        let t = tags("Dr. Meier las z.B. 3,5 E-Mails.", LanguageCode::De);
        let surfaces: Vec<_> = t.iter().map(|(s, _)| s.as_str()).collect();
        assert_eq!(surfaces, vec!["Dr.", "Meier", "las", "z.B.", "3,5", "E-Mails", "."]);
        assert_eq!(t[4].1, PosTag::Num);
    }

    #[test]
    fn token_surface_matches_span() {
        let text = "„Ich bin’s“, sagte sie – müde.";
        for tok in tagger().tag(text, &LanguageCode::De).unwrap() {
            assert_eq!(tok.span.slice(text), tok.surface);
            assert_eq!(tok.lemma, tok.surface.to_lowercase());
        }
    }

    #[test]
    fn unsupported_language_is_an_error() {
        let err = tagger().tag("bonjour", &LanguageCode::Other("fr".into()));
        assert!(matches!(err, Err(TextError::UnsupportedLanguage(_))));
    }
}
