use super::{
    lexicon_for, load_cues, ClassifierError, GibbsPhase, LevelClassifier, LevelCue,
    ReflectiveLevel,
};
use crate::document::AnalyzedDocument;
use crate::lang::PerLanguage;
use crate::lexicon::{CueLexicon, DataSource, LexiconError};

/// Ordinal ladder over per-sentence Gibbs phases and document cues.
///
/// | level | condition |
/// |---|---|
/// | 1 | always (the floor) |
/// | 2 | some sentence peaks at `evaluation` |
/// | 3 | at least two `analysis` sentences and a perspective-contrast cue |
/// | 4 | level 3 plus a `future_plans` sentence |
/// | 5 | level 4 plus a wider-context (social, political, historical) cue |
///
/// The highest satisfied rung wins. Every condition only counts, so adding
/// sentences never lowers the result.
#[derive(Debug, Clone)]
pub struct LadderLevelClassifier {
    lexicons: PerLanguage<CueLexicon<LevelCue>>,
}

impl LadderLevelClassifier {
    pub const MIN_ANALYSIS_SENTENCES: usize = 2;

    pub fn load(src: &DataSource) -> Result<Self, LexiconError> {
        Ok(LadderLevelClassifier {
            lexicons: load_cues(src, "levels")?,
        })
    }
}

impl LevelClassifier for LadderLevelClassifier {
    fn predict_reflective_level(
        &self,
        document: &AnalyzedDocument,
    ) -> Result<ReflectiveLevel, ClassifierError> {
        if document.sentences.is_empty() {
            return Err(ClassifierError::EmptyDocument);
        }
        let lexicon = lexicon_for(&self.lexicons, "level", &document.language)?;
        let phases: Vec<GibbsPhase> = document.analyses.iter().map(|a| a.gibbs.argmax()).collect();
        let count = |phase| phases.iter().filter(|p| **p == phase).count();
        let has_cue = |wanted: LevelCue| {
            document
                .sentences
                .iter()
                .flat_map(|s| s.words())
                .any(|t| lexicon.lookup(&t.lemma).any(|(cue, _)| *cue == wanted))
        };

        let dialogical =
            count(GibbsPhase::Analysis) >= Self::MIN_ANALYSIS_SENTENCES && has_cue(LevelCue::Contrast);
        let transformative = dialogical && count(GibbsPhase::FuturePlans) >= 1;
        let critical = transformative && has_cue(LevelCue::WiderContext);

        Ok(if critical {
            ReflectiveLevel::CriticalReflection
        } else if transformative {
            ReflectiveLevel::TransformativeReflection
        } else if dialogical {
            ReflectiveLevel::DialogicalReflection
        } else if count(GibbsPhase::Evaluation) > 0 {
            ReflectiveLevel::ReflectiveDescription
        } else {
            ReflectiveLevel::Description
        })
    }
}
