//! Submission gate: decides whether a text is worth analyzing.

use serde::{Deserialize, Serialize};

use crate::lexicon::{word_list, DataSource, LexiconError};
use crate::textproc::TextProcessor;

/// Whether one failing check is enough to block a submission.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateMode {
    /// Block when the text is too short or contains forbidden content.
    #[default]
    Disjunctive,
    /// Block only when the text is too short and contains forbidden content.
    Conjunctive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GateConfig {
    pub mode: GateMode,
    pub min_sentences: usize,
    /// Matched case-insensitively as substrings.
    pub forbidden: Vec<String>,
}

impl GateConfig {
    pub const FORBIDDEN_FILE: &'static str = "forbidden.txt";

    pub fn load_forbidden(src: &DataSource) -> Result<Vec<String>, LexiconError> {
        Ok(Self::parse_forbidden(&src.read(Self::FORBIDDEN_FILE)?))
    }

    /// One sequence per line; blank lines and `#` comments are skipped.
    pub fn parse_forbidden(text: &str) -> Vec<String> {
        word_list(text)
    }
}

impl Default for GateConfig {
    fn default() -> Self {
        GateConfig {
            mode: GateMode::Disjunctive,
            min_sentences: 3,
            forbidden: Self::load_forbidden(&DataSource::bundled())
                .expect("bundled forbidden list is readable"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateVerdict {
    Accepted,
    RevisionRequest,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GateReason {
    TooShort { sentences: usize, required: usize },
    ForbiddenSequence { matched: String },
}

/// Outcome of the gate. Reasons are listed only for rejected submissions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateResult {
    pub verdict: GateVerdict,
    pub reasons: Vec<GateReason>,
}

impl GateResult {
    pub fn accepted(&self) -> bool {
        self.verdict == GateVerdict::Accepted
    }
}

pub fn validate_submission(text: &str, processor: &TextProcessor, config: &GateConfig) -> GateResult {
    let sentences = processor.segment_sentences(text).map_or(0, |s| s.len());
    let lowered = text.to_lowercase();
    let too_short = (sentences < config.min_sentences).then_some(GateReason::TooShort {
        sentences,
        required: config.min_sentences,
    });
    let forbidden: Vec<GateReason> = config
        .forbidden
        .iter()
        .filter(|f| !f.is_empty() && lowered.contains(&f.to_lowercase()))
        .map(|f| GateReason::ForbiddenSequence { matched: f.clone() })
        .collect();

    let blocked = match config.mode {
        GateMode::Disjunctive => too_short.is_some() || !forbidden.is_empty(),
        GateMode::Conjunctive => too_short.is_some() && !forbidden.is_empty(),
    };
    if blocked {
        GateResult {
            verdict: GateVerdict::RevisionRequest,
            reasons: too_short.into_iter().chain(forbidden).collect(),
        }
    } else {
        GateResult { verdict: GateVerdict::Accepted, reasons: Vec::new() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(text: &str, mode: GateMode) -> GateResult {
        let processor = TextProcessor::load(&DataSource::bundled()).unwrap();
        validate_submission(text, &processor, &GateConfig { mode, ..GateConfig::default() })
    }

    #[test]
    fn two_sentences_are_too_short() {
        let r = run("Heute war gut. Morgen auch.", GateMode::Disjunctive);
        assert_eq!(r.verdict, GateVerdict::RevisionRequest);
        assert_eq!(r.reasons, vec![GateReason::TooShort { sentences: 2, required: 3 }]);
    }

    #[test]
    fn forbidden_match_ignores_case() {
        let r = run("Eins. Zwei. Drei. LOREM IPSUM dolor.", GateMode::Disjunctive);
        assert_eq!(
            r.reasons,
            vec![GateReason::ForbiddenSequence { matched: "lorem ipsum".into() }]
        );
    }

    #[test]
    fn conjunctive_mode_needs_both() {
        assert!(run("Lorem ipsum.", GateMode::Conjunctive).verdict == GateVerdict::RevisionRequest);
        assert!(run("Kurz.", GateMode::Conjunctive).accepted());
        assert!(run("Eins. Zwei. Lorem ipsum.", GateMode::Conjunctive).accepted());
    }

    #[test]
    fn blank_text_has_zero_sentences() {
        let r = run("   ", GateMode::Disjunctive);
        assert_eq!(r.reasons, vec![GateReason::TooShort { sentences: 0, required: 3 }]);
    }
}
