//! Classifier ports and the lexicon-driven baseline backends.
//!
//! Every task (emotion, Gibbs phase, sentiment, topic, reflective level) is
//! a trait object so that trained models can replace the baselines without
//! touching the pipeline. Ports are `Send + Sync`; a backend that needs
//! `&mut self` implements the `*Mut` twin of its port and is wrapped in
//! [`Serialized`], which funnels calls through a mutex.

mod emotion;
mod gibbs;
mod labels;
mod level;
mod sentiment;
mod topic;

use std::sync::{Arc, Mutex, MutexGuard};

use serde::{Deserialize, Serialize};

use crate::document::AnalyzedDocument;
use crate::lang::LanguageCode;
use crate::lexicon::{DataSource, LexiconError};
use crate::textproc::Sentence;

pub use emotion::{EmotionPrediction, LexiconEmotionClassifier};
pub use gibbs::{GibbsDistribution, LexiconGibbsClassifier, GIBBS_SMOOTHING};
pub use labels::{
    ClusteringId, EmotionLabel, GibbsPhase, LevelCue, ReflectiveLevel, SentimentCue,
    SentimentPolarity,
};
pub use level::LadderLevelClassifier;
pub use sentiment::LexiconSentimentClassifier;
pub use topic::{KeywordTopicAssigner, TopicAssignment, TopicCatalog};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ClassifierError {
    #[error("sentence has no tokens")]
    EmptySentence,
    #[error("document has no sentences")]
    EmptyDocument,
    #[error("no {task} model for language {lang}")]
    UnsupportedLanguage { task: &'static str, lang: LanguageCode },
    #[error("unknown clustering {0}")]
    UnknownClustering(String),
    #[error("{0}")]
    Backend(String),
}

/// Serializes access to a backend that needs exclusive state.
#[derive(Debug, Default)]
pub struct Serialized<B>(Mutex<B>);

impl<B> Serialized<B> {
    pub fn new(backend: B) -> Self {
        Serialized(Mutex::new(backend))
    }

    fn lock(&self) -> Result<MutexGuard<'_, B>, ClassifierError> {
        self.0
            .lock()
            .map_err(|_| ClassifierError::Backend("backend mutex poisoned".into()))
    }
}

macro_rules! port {
    (
        $(#[$meta:meta])*
        $port:ident / $port_mut:ident :
        fn $method:ident(&self $(, $arg:ident : $ty:ty)*) -> $out:ty;
    ) => {
        $(#[$meta])*
        pub trait $port: Send + Sync {
            fn $method(&self $(, $arg: $ty)*) -> Result<$out, ClassifierError>;
        }

        /// Stateful variant; wrap in [`Serialized`] to use as a port.
        pub trait $port_mut: Send {
            fn $method(&mut self $(, $arg: $ty)*) -> Result<$out, ClassifierError>;
        }

        impl<B: $port_mut> $port for Serialized<B> {
            fn $method(&self $(, $arg: $ty)*) -> Result<$out, ClassifierError> {
                self.lock()?.$method($($arg),*)
            }
        }
    };
}

port! {
    /// Multi-label emotion prediction for one sentence.
    EmotionClassifier / EmotionClassifierMut:
    fn predict_emotions(&self, sentence: &Sentence, lang: &LanguageCode) -> EmotionPrediction;
}

port! {
    /// Distribution over Gibbs phases for one sentence.
    GibbsClassifier / GibbsClassifierMut:
    fn predict_gibbs(&self, sentence: &Sentence, lang: &LanguageCode) -> GibbsDistribution;
}

port! {
    SentimentClassifier / SentimentClassifierMut:
    fn predict_sentiment(&self, sentence: &Sentence, lang: &LanguageCode) -> SentimentPolarity;
}

port! {
    TopicAssigner / TopicAssignerMut:
    fn assign_topic(
        &self,
        sentence: &Sentence,
        lang: &LanguageCode,
        clustering: ClusteringId
    ) -> TopicAssignment;
}

port! {
    /// Document-level reflective depth. Receives the document with every
    /// per-sentence analysis filled in.
    LevelClassifier / LevelClassifierMut:
    fn predict_reflective_level(&self, document: &AnalyzedDocument) -> ReflectiveLevel;
}

/// Backend name per task, as read from configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BackendSelection {
    pub emotion: String,
    pub gibbs: String,
    pub sentiment: String,
    pub topic: String,
    pub level: String,
}

impl Default for BackendSelection {
    fn default() -> Self {
        let lexicon = || BASELINE.to_string();
        BackendSelection {
            emotion: lexicon(),
            gibbs: lexicon(),
            sentiment: lexicon(),
            topic: "keyword".into(),
            level: "ladder".into(),
        }
    }
}

const BASELINE: &str = "lexicon";

#[derive(Debug, thiserror::Error)]
pub enum BackendError {
    #[error("unknown {task} backend {name:?}")]
    Unknown { task: &'static str, name: String },
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
}

/// One loaded backend per task, shared read-only across requests.
#[derive(Clone)]
pub struct Backends {
    pub emotion: Arc<dyn EmotionClassifier>,
    pub gibbs: Arc<dyn GibbsClassifier>,
    pub sentiment: Arc<dyn SentimentClassifier>,
    pub topic: Arc<dyn TopicAssigner>,
    pub level: Arc<dyn LevelClassifier>,
}

impl std::fmt::Debug for Backends {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Backends").finish_non_exhaustive()
    }
}

impl Backends {
    pub fn baseline(src: &DataSource) -> Result<Self, BackendError> {
        Self::select(&BackendSelection::default(), src)
    }

    /// Builds the named backends. Only the bundled baselines are registered.
    pub fn select(selection: &BackendSelection, src: &DataSource) -> Result<Self, BackendError> {
        let check = |task: &'static str, name: &str, expected: &str| {
            if name == expected {
                Ok(())
            } else {
                Err(BackendError::Unknown {
                    task,
                    name: name.to_string(),
                })
            }
        };
        check("emotion", &selection.emotion, BASELINE)?;
        check("gibbs", &selection.gibbs, BASELINE)?;
        check("sentiment", &selection.sentiment, BASELINE)?;
        check("topic", &selection.topic, "keyword")?;
        check("level", &selection.level, "ladder")?;
        let emotion = LexiconEmotionClassifier::load(src)?;
        Ok(Backends {
            gibbs: Arc::new(LexiconGibbsClassifier::load(src, emotion.clone())?),
            emotion: Arc::new(emotion),
            sentiment: Arc::new(LexiconSentimentClassifier::load(src)?),
            topic: Arc::new(KeywordTopicAssigner::load(src)?),
            level: Arc::new(LadderLevelClassifier::load(src)?),
        })
    }
}

pub(crate) fn load_cues<L>(
    src: &DataSource,
    stem: &str,
) -> Result<crate::lang::PerLanguage<crate::lexicon::CueLexicon<L>>, LexiconError>
where
    L: std::str::FromStr + Clone,
{
    crate::lang::PerLanguage::try_build(|lang| {
        let name = format!("{stem}.{lang}.tsv");
        crate::lexicon::CueLexicon::parse(&name, &src.read(&name)?)
    })
}

pub(crate) fn lexicon_for<'a, T>(
    lexicons: &'a crate::lang::PerLanguage<T>,
    task: &'static str,
    lang: &LanguageCode,
) -> Result<&'a T, ClassifierError> {
    lexicons.get(lang).ok_or_else(|| ClassifierError::UnsupportedLanguage {
        task,
        lang: lang.clone(),
    })
}
