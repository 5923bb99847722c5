use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ReasonerError;
use crate::classifiers::{GibbsPhase, ReflectiveLevel};
use crate::lang::LanguageCode;
use crate::lexicon::{DataSource, LexiconError};

/// Placeholder names the composer knows how to fill.
pub const SUPPORTED_PLACEHOLDERS: [&str; 6] = [
    "phase",
    "level",
    "level_name",
    "mean_length",
    "sentence_count",
    "topic",
];

const MIN_VARIANTS: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinguisticRule {
    Brevity,
    Coherence,
    Expressivity,
    Variability,
}

impl LinguisticRule {
    pub const ALL: [LinguisticRule; 4] = [
        LinguisticRule::Brevity,
        LinguisticRule::Coherence,
        LinguisticRule::Expressivity,
        LinguisticRule::Variability,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            LinguisticRule::Brevity => "brevity",
            LinguisticRule::Coherence => "coherence",
            LinguisticRule::Expressivity => "expressivity",
            LinguisticRule::Variability => "variability",
        }
    }
}

/// Condition under which a prompt record is eligible.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Trigger {
    GibbsMissing(GibbsPhase),
    Linguistic(LinguisticRule),
    SentimentChallenge,
    SentimentOptimism,
    Level(ReflectiveLevel),
}

impl Trigger {
    /// Every trigger the selector can emit. Level 1 is never a target
    /// because targets are one above an existing level.
    pub fn reachable() -> Vec<Trigger> {
        let mut out: Vec<Trigger> = GibbsPhase::ALL.iter().map(|p| Trigger::GibbsMissing(*p)).collect();
        out.extend(LinguisticRule::ALL.iter().map(|r| Trigger::Linguistic(*r)));
        out.push(Trigger::SentimentChallenge);
        out.push(Trigger::SentimentOptimism);
        out.extend((2..=5).filter_map(ReflectiveLevel::from_ordinal).map(Trigger::Level));
        out
    }
}

impl fmt::Display for Trigger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Trigger::GibbsMissing(p) => write!(f, "gibbs_missing:{p}"),
            Trigger::Linguistic(r) => write!(f, "linguistic:{}", r.as_str()),
            Trigger::SentimentChallenge => f.write_str("sentiment:challenge"),
            Trigger::SentimentOptimism => f.write_str("sentiment:optimism"),
            Trigger::Level(l) => write!(f, "level:{}", l.ordinal()),
        }
    }
}

impl FromStr for Trigger {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("unknown trigger {s:?}");
        let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "gibbs_missing" => arg.parse().map(Trigger::GibbsMissing).map_err(|_| bad()),
            "linguistic" => LinguisticRule::ALL
                .iter()
                .find(|r| r.as_str() == arg)
                .map(|r| Trigger::Linguistic(*r))
                .ok_or_else(bad),
            "sentiment" => match arg {
                "challenge" => Ok(Trigger::SentimentChallenge),
                "optimism" => Ok(Trigger::SentimentOptimism),
                _ => Err(bad()),
            },
            "level" => arg
                .parse::<u8>()
                .ok()
                .and_then(ReflectiveLevel::from_ordinal)
                .map(Trigger::Level)
                .ok_or_else(bad),
            _ => Err(bad()),
        }
    }
}

impl Serialize for Trigger {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Trigger {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PromptRecord {
    pub id: String,
    pub trigger: Trigger,
    /// Phrasings per language tag. Index `i` is expected to be a
    /// translation of index `i` in every other language.
    pub variants: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub placeholders: Vec<String>,
}

impl PromptRecord {
    pub fn variants_for(&self, lang: &LanguageCode) -> Option<&[String]> {
        self.variants.get(lang.as_str()).map(Vec::as_slice)
    }

    /// Number of variant indices usable in every native language.
    pub fn parallel_variant_count(&self) -> usize {
        LanguageCode::NATIVE
            .iter()
            .map(|l| self.variants_for(l).map_or(0, <[String]>::len))
            .min()
            .unwrap_or(0)
    }
}

/// A prompt database as read from disk, before validation.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawPromptDb {
    pub records: Vec<PromptRecord>,
}

impl RawPromptDb {
    pub fn from_json(text: &str) -> Result<Self, ReasonerError> {
        serde_json::from_str(text).map_err(|e| ReasonerError::Schema(e.to_string()))
    }

    pub fn lint(&self) -> LintReport {
        lint(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LintIssue {
    MissingTrigger { trigger: Trigger },
    MissingLanguage { id: String, lang: String },
    TooFewVariants { id: String, lang: String, count: usize },
    UndeclaredPlaceholder { id: String, lang: String, name: String },
    UnsupportedPlaceholder { id: String, name: String },
    DuplicateId { id: String },
    /// Warning: a later record with the same trigger is never selected.
    ShadowedRecord { id: String, trigger: Trigger },
    /// Warning: languages carry different numbers of variants, so the
    /// extra ones are never selected.
    UnevenVariants { id: String },
}

impl fmt::Display for LintIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LintIssue::MissingTrigger { trigger } => write!(f, "no record for trigger {trigger}"),
            LintIssue::MissingLanguage { id, lang } => write!(f, "{id}: missing language {lang}"),
            LintIssue::TooFewVariants { id, lang, count } => {
                write!(f, "{id}: {lang} has {count} variant(s), need at least {MIN_VARIANTS}")
            }
            LintIssue::UndeclaredPlaceholder { id, lang, name } => {
                write!(f, "{id}: {lang} uses undeclared placeholder {{{name}}}")
            }
            LintIssue::UnsupportedPlaceholder { id, name } => {
                write!(f, "{id}: placeholder {{{name}}} is not supported")
            }
            LintIssue::DuplicateId { id } => write!(f, "duplicate record id {id}"),
            LintIssue::ShadowedRecord { id, trigger } => {
                write!(f, "{id}: shadowed by an earlier record for {trigger}")
            }
            LintIssue::UnevenVariants { id } => {
                write!(f, "{id}: languages have different variant counts")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LintReport {
    pub errors: Vec<LintIssue>,
    pub warnings: Vec<LintIssue>,
}

impl LintReport {
    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }
}

/// Names inside `{...}` in `text`, in order of appearance.
pub(crate) fn placeholder_names(text: &str) -> Vec<&str> {
    let mut names = Vec::new();
    let mut rest = text;
    while let Some(open) = rest.find('{') {
        let after = &rest[open + 1..];
        match after.find('}') {
            Some(close) => {
                names.push(&after[..close]);
                rest = &after[close + 1..];
            }
            None => break,
        }
    }
    names
}

fn lint(db: &RawPromptDb) -> LintReport {
    let mut report = LintReport::default();
    let mut ids = BTreeSet::new();
    let mut seen_triggers = BTreeSet::new();

    for record in &db.records {
        if !ids.insert(record.id.as_str()) {
            report.errors.push(LintIssue::DuplicateId { id: record.id.clone() });
        }
        if !seen_triggers.insert(record.trigger) {
            report.warnings.push(LintIssue::ShadowedRecord {
                id: record.id.clone(),
                trigger: record.trigger,
            });
        }
        for name in &record.placeholders {
            if !SUPPORTED_PLACEHOLDERS.contains(&name.as_str()) {
                report.errors.push(LintIssue::UnsupportedPlaceholder {
                    id: record.id.clone(),
                    name: name.clone(),
                });
            }
        }
        let mut counts = BTreeSet::new();
        for lang in LanguageCode::NATIVE.iter() {
            let Some(variants) = record.variants_for(lang) else {
                report.errors.push(LintIssue::MissingLanguage {
                    id: record.id.clone(),
                    lang: lang.to_string(),
                });
                continue;
            };
            counts.insert(variants.len());
            if variants.len() < MIN_VARIANTS {
                report.errors.push(LintIssue::TooFewVariants {
                    id: record.id.clone(),
                    lang: lang.to_string(),
                    count: variants.len(),
                });
            }
            let used: BTreeSet<&str> = variants.iter().flat_map(|v| placeholder_names(v)).collect();
            for name in used {
                if !record.placeholders.iter().any(|p| p == name) {
                    report.errors.push(LintIssue::UndeclaredPlaceholder {
                        id: record.id.clone(),
                        lang: lang.to_string(),
                        name: name.to_string(),
                    });
                }
            }
        }
        if counts.len() > 1 {
            report.warnings.push(LintIssue::UnevenVariants { id: record.id.clone() });
        }
    }

    for trigger in Trigger::reachable() {
        if !seen_triggers.contains(&trigger) {
            report.errors.push(LintIssue::MissingTrigger { trigger });
        }
    }
    report
}

/// A prompt database that passed lint. Immutable after construction.
#[derive(Debug, Clone)]
pub struct PromptDb {
    records: Vec<PromptRecord>,
    by_trigger: BTreeMap<Trigger, usize>,
    warnings: Vec<LintIssue>,
}

impl PromptDb {
    pub const FILE: &'static str = "prompts.json";

    pub fn validate(raw: RawPromptDb) -> Result<Self, ReasonerError> {
        let report = raw.lint();
        if !report.is_ok() {
            return Err(ReasonerError::PromptGap(report.errors));
        }
        let mut by_trigger = BTreeMap::new();
        for (i, record) in raw.records.iter().enumerate() {
            by_trigger.entry(record.trigger).or_insert(i);
        }
        Ok(PromptDb {
            records: raw.records,
            by_trigger,
            warnings: report.warnings,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, ReasonerError> {
        Self::validate(RawPromptDb::from_json(text)?)
    }

    pub fn load(src: &DataSource) -> Result<Self, ReasonerError> {
        let text = src.read(Self::FILE).map_err(|e: LexiconError| ReasonerError::Schema(e.to_string()))?;
        Self::from_json(&text)
    }

    pub fn bundled() -> Self {
        Self::load(&DataSource::bundled()).expect("bundled prompt database is valid")
    }

    /// The first record declared for `trigger`.
    pub fn for_trigger(&self, trigger: Trigger) -> Option<&PromptRecord> {
        self.by_trigger.get(&trigger).map(|i| &self.records[*i])
    }

    pub fn get(&self, id: &str) -> Option<&PromptRecord> {
        self.records.iter().find(|r| r.id == id)
    }

    pub fn records(&self) -> &[PromptRecord] {
        &self.records
    }

    pub fn warnings(&self) -> &[LintIssue] {
        &self.warnings
    }
}
