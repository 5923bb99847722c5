//! Line-oriented lexicon files and the bundled data set.
//!
//! Every lexicon is UTF-8 with one entry per line and tab-separated
//! columns. Blank lines and lines starting with `#` are ignored. The
//! language is selected by filename suffix (`pos.de.tsv`).

use std::borrow::Cow;
use std::collections::HashMap;
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Debug, thiserror::Error)]
pub enum LexiconError {
    #[error("{file}:{line}: {message}")]
    Malformed {
        file: String,
        line: usize,
        message: String,
    },
    #[error("missing lexicon {0}")]
    Missing(String),
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

macro_rules! bundled {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../data/", $name)))),*]
    };
}

static BUNDLED: &[(&str, &str)] = bundled![
    "abbrev.de.txt",
    "abbrev.en.txt",
    "abbrev.es.txt",
    "connectives.de.tsv",
    "connectives.en.tsv",
    "connectives.es.tsv",
    "emotions.de.tsv",
    "emotions.en.tsv",
    "emotions.es.tsv",
    "forbidden.txt",
    "gibbs.de.tsv",
    "gibbs.en.tsv",
    "gibbs.es.tsv",
    "langid/de.txt",
    "langid/en.txt",
    "langid/es.txt",
    "langid/fr.txt",
    "langid/it.txt",
    "levels.de.tsv",
    "levels.en.tsv",
    "levels.es.tsv",
    "pos.de.tsv",
    "pos.en.tsv",
    "pos.es.tsv",
    "prompts.json",
    "sentiment.de.tsv",
    "sentiment.en.tsv",
    "sentiment.es.tsv",
    "topics.general_educational.tsv",
    "topics.pedagogy_specific.tsv",
];

/// Where lexicon files come from.
///
/// With a directory configured, files present there replace the bundled
/// copy of the same name; anything absent falls back to the bundled data.
#[derive(Debug, Clone, Default)]
pub struct DataSource {
    dir: Option<PathBuf>,
}

impl DataSource {
    pub fn bundled() -> Self {
        DataSource { dir: None }
    }

    pub fn with_dir(dir: impl Into<PathBuf>) -> Self {
        DataSource {
            dir: Some(dir.into()),
        }
    }

    pub fn read(&self, name: &str) -> Result<Cow<'static, str>, LexiconError> {
        if let Some(dir) = &self.dir {
            let path = dir.join(name);
            if path.is_file() {
                return std::fs::read_to_string(&path)
                    .map(Cow::Owned)
                    .map_err(|source| LexiconError::Io {
                        path: path.display().to_string(),
                        source,
                    });
            }
        }
        bundled_file(name)
            .map(Cow::Borrowed)
            .ok_or_else(|| LexiconError::Missing(name.to_string()))
    }
}

pub fn bundled_file(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

/// Non-comment lines as `(line_number, columns)`.
pub(crate) fn rows(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            None
        } else {
            Some((i + 1, line.split('\t').map(str::trim).collect()))
        }
    })
}

/// Single-column word lists (abbreviations, forbidden sequences).
pub(crate) fn word_list(text: &str) -> Vec<String> {
    rows(text).map(|(_, cols)| cols[0].to_lowercase()).collect()
}

/// A term in a cue lexicon. A trailing `*` matches any continuation.
#[derive(Debug, Clone, PartialEq)]
enum Pattern {
    Exact(String),
    Prefix(String),
}

/// Weighted cue lexicon in `term<TAB>label<TAB>weight` form.
#[derive(Debug, Clone)]
pub struct CueLexicon<L> {
    exact: HashMap<String, Vec<(L, f64)>>,
    prefixes: Vec<(String, L, f64)>,
}

impl<L> CueLexicon<L>
where
    L: FromStr + Clone,
{
    pub fn parse(file: &str, text: &str) -> Result<Self, LexiconError> {
        let mut exact: HashMap<String, Vec<(L, f64)>> = HashMap::new();
        let mut prefixes = Vec::new();
        for (line, cols) in rows(text) {
            let malformed = |message: String| LexiconError::Malformed {
                file: file.to_string(),
                line,
                message,
            };
            if cols.len() < 2 {
                return Err(malformed("expected term<TAB>label[<TAB>weight]".into()));
            }
            let label = cols[1]
                .parse::<L>()
                .map_err(|_| malformed(format!("unknown label {:?}", cols[1])))?;
            let weight = match cols.get(2) {
                Some(w) => w
                    .parse::<f64>()
                    .ok()
                    .filter(|w| w.is_finite() && *w > 0.0)
                    .ok_or_else(|| malformed(format!("bad weight {w:?}")))?,
                None => 1.0,
            };
            match pattern(cols[0]) {
                Pattern::Exact(term) => exact.entry(term).or_default().push((label, weight)),
                Pattern::Prefix(stem) => prefixes.push((stem, label, weight)),
            }
        }
        Ok(CueLexicon { exact, prefixes })
    }

    /// All `(label, weight)` cues matching a lowercase word.
    pub fn lookup<'a>(&'a self, word: &'a str) -> impl Iterator<Item = (&'a L, f64)> + 'a {
        let exact = self
            .exact
            .get(word)
            .into_iter()
            .flatten()
            .map(|(l, w)| (l, *w));
        let prefix = self
            .prefixes
            .iter()
            .filter(move |(stem, _, _)| word.starts_with(stem.as_str()))
            .map(|(_, l, w)| (l, *w));
        exact.chain(prefix)
    }

    pub fn is_empty(&self) -> bool {
        self.exact.is_empty() && self.prefixes.is_empty()
    }
}

fn pattern(term: &str) -> Pattern {
    let term = term.to_lowercase();
    match term.strip_suffix('*') {
        Some(stem) => Pattern::Prefix(stem.to_string()),
        None => Pattern::Exact(term),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_bundled_file_is_reachable() {
        let src = DataSource::bundled();
        for (name, _) in BUNDLED {
            assert!(!src.read(name).unwrap().is_empty(), "{name}");
        }
        assert!(matches!(src.read("nope.tsv"), Err(LexiconError::Missing(_))));
    }

    #[test]
    fn directory_overrides_bundled_copy() {
        let dir = std::env::temp_dir().join(format!("reflector-lex-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        std::fs::write(dir.join("forbidden.txt"), "spam\n").unwrap();
        let src = DataSource::with_dir(&dir);
        assert_eq!(src.read("forbidden.txt").unwrap(), "spam\n");
        assert!(src.read("pos.de.tsv").unwrap().contains("weil"));
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn cue_lexicon_matches_exact_and_prefix_terms() {
        let lex: CueLexicon<String> =
            CueLexicon::parse("t", "# c\nzufrieden*\tsat\t1.0\nsicher\tconf\t2\n").unwrap();
        let hits: Vec<_> = lex.lookup("zufriedenheit").collect();
        assert_eq!(hits, vec![(&"sat".to_string(), 1.0)]);
        assert_eq!(lex.lookup("sicher").count(), 1);
        assert_eq!(lex.lookup("sicherlich").count(), 0);
        assert_eq!(lex.lookup("unzufrieden").count(), 0);
    }

    #[test]
    fn cue_lexicon_rejects_bad_rows() {
        let err = CueLexicon::<String>::parse("t", "x\n").unwrap_err();
        assert!(err.to_string().contains("t:1"));
        assert!(CueLexicon::<String>::parse("t", "x\ty\t-1\n").is_err());
    }
}
