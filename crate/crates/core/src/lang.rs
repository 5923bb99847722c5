//! Language codes and per-language storage.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// A submission or feedback language.
///
/// German, English and Spanish have native lexicons and prompt templates;
/// anything else is carried as a lowercase ISO-639-1 tag.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum LanguageCode {
    De,
    En,
    Es,
    Other(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid language tag {0:?}: expected a two-letter ISO-639-1 code")]
pub struct InvalidLanguageTag(pub String);

impl LanguageCode {
    pub const NATIVE: [LanguageCode; 3] = [LanguageCode::De, LanguageCode::En, LanguageCode::Es];

    pub fn as_str(&self) -> &str {
        match self {
            LanguageCode::De => "de",
            LanguageCode::En => "en",
            LanguageCode::Es => "es",
            LanguageCode::Other(tag) => tag,
        }
    }

    /// True for languages with bundled lexicons and templates.
    pub fn is_native(&self) -> bool {
        !matches!(self, LanguageCode::Other(_))
    }
}

impl FromStr for LanguageCode {
    type Err = InvalidLanguageTag;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let tag = s.trim().to_ascii_lowercase();
        match tag.as_str() {
            "de" => Ok(LanguageCode::De),
            "en" => Ok(LanguageCode::En),
            "es" => Ok(LanguageCode::Es),
            t if t.len() == 2 && t.bytes().all(|b| b.is_ascii_lowercase()) => {
                Ok(LanguageCode::Other(tag))
            }
            _ => Err(InvalidLanguageTag(s.to_string())),
        }
    }
}

impl TryFrom<String> for LanguageCode {
    type Error = InvalidLanguageTag;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        value.parse()
    }
}

impl From<LanguageCode> for String {
    fn from(value: LanguageCode) -> Self {
        value.as_str().to_string()
    }
}

impl fmt::Display for LanguageCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One value per native language.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PerLanguage<T> {
    #[serde(default)]
    pub de: T,
    #[serde(default)]
    pub en: T,
    #[serde(default)]
    pub es: T,
}

impl<T> PerLanguage<T> {
    pub fn try_build<E>(mut f: impl FnMut(&LanguageCode) -> Result<T, E>) -> Result<Self, E> {
        Ok(PerLanguage {
            de: f(&LanguageCode::De)?,
            en: f(&LanguageCode::En)?,
            es: f(&LanguageCode::Es)?,
        })
    }

    pub fn get(&self, lang: &LanguageCode) -> Option<&T> {
        match lang {
            LanguageCode::De => Some(&self.de),
            LanguageCode::En => Some(&self.en),
            LanguageCode::Es => Some(&self.es),
            LanguageCode::Other(_) => None,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (LanguageCode, &T)> {
        [
            (LanguageCode::De, &self.de),
            (LanguageCode::En, &self.en),
            (LanguageCode::Es, &self.es),
        ]
        .into_iter()
    }
}
