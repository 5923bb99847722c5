//! End-to-end pipeline over resources loaded once and shared read-only.

use std::hash::{BuildHasher, Hasher};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::classifiers::{
    BackendError, BackendSelection, Backends, ClassifierError, ClusteringId,
};
use crate::document::{AnalyzedDocument, SentenceAnalysis};
use crate::gate::{validate_submission, GateConfig, GateResult};
use crate::lang::LanguageCode;
use crate::lexicon::{DataSource, LexiconError};
use crate::lingscore::{score_document, ConnectorLexicons, LingError};
use crate::reasoner::{
    build_profile, compose_feedback, select_prompts, FeedbackResponse, PromptDb, ReasonerConfig,
    ReasonerError, SentenceAnnotation,
};
use crate::textproc::{
    translate_or_stub, StubTranslator, TextError, TextProcessor, TranslateError, TranslatorPort,
};

/// Where the prompt-variant seed comes from when a request does not set one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeedPolicy {
    Fixed(u64),
    /// Derived from the submitted text, so resubmitting a text repeats its
    /// feedback.
    #[default]
    TextHash,
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EngineConfig {
    pub gate: GateConfig,
    pub reasoner: ReasonerConfig,
    pub backends: BackendSelection,
    pub seed_policy: SeedPolicy,
    pub clustering: ClusteringId,
    /// Assumed when a text is too short to identify its language.
    pub default_language: LanguageCode,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            gate: GateConfig::default(),
            reasoner: ReasonerConfig::default(),
            backends: BackendSelection::default(),
            seed_policy: SeedPolicy::TextHash,
            clustering: ClusteringId::default(),
            default_language: LanguageCode::De,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalyzeOptions {
    pub seed: Option<u64>,
    pub clustering: Option<ClusteringId>,
    pub feedback_language: Option<LanguageCode>,
}

#[derive(Debug, thiserror::Error)]
pub enum AnalyzeError {
    #[error("submission needs revision")]
    GateRejected(GateResult),
    #[error(transparent)]
    Text(#[from] TextError),
    #[error(transparent)]
    Linguistic(#[from] LingError),
    #[error("{port} backend failed: {source}")]
    Backend { port: &'static str, source: ClassifierError },
    #[error(transparent)]
    Reasoner(#[from] ReasonerError),
    #[error(transparent)]
    Translation(#[from] TranslateError),
}

#[derive(Debug, thiserror::Error)]
pub enum EngineError {
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error(transparent)]
    Backend(#[from] BackendError),
    #[error(transparent)]
    Prompts(#[from] ReasonerError),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineCounters {
    pub gate_rejections: u64,
    pub analyses_started: u64,
    pub analyses_completed: u64,
}

#[derive(Debug, Default)]
struct Counters {
    gate_rejections: AtomicU64,
    analyses_started: AtomicU64,
    analyses_completed: AtomicU64,
}

pub struct Engine {
    processor: TextProcessor,
    connectors: ConnectorLexicons,
    backends: Backends,
    prompts: PromptDb,
    translator: Arc<dyn TranslatorPort>,
    config: EngineConfig,
    counters: Counters,
}

impl std::fmt::Debug for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Engine")
            .field("config", &self.config)
            .field("translator", &self.translator.name())
            .finish_non_exhaustive()
    }
}

/// First eight bytes of the text's SHA-256, little endian.
pub fn text_seed(text: &str) -> u64 {
    let digest = Sha256::digest(text.as_bytes());
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(bytes)
}

impl Engine {
    /// Loads every lexicon, backend and the prompt database from `src`,
    /// with the offline stub as translator.
    pub fn load(src: &DataSource, config: EngineConfig) -> Result<Self, EngineError> {
        Ok(Engine {
            processor: TextProcessor::load(src)?,
            connectors: ConnectorLexicons::load(src)?,
            backends: Backends::select(&config.backends, src)?,
            prompts: PromptDb::load(src)?,
            translator: Arc::new(StubTranslator),
            config,
            counters: Counters::default(),
        })
    }

    pub fn bundled() -> Result<Self, EngineError> {
        Self::load(&DataSource::bundled(), EngineConfig::default())
    }

    pub fn with_backends(mut self, backends: Backends) -> Self {
        self.backends = backends;
        self
    }

    pub fn with_prompts(mut self, prompts: PromptDb) -> Self {
        self.prompts = prompts;
        self
    }

    pub fn with_translator(mut self, translator: Arc<dyn TranslatorPort>) -> Self {
        self.translator = translator;
        self
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn processor(&self) -> &TextProcessor {
        &self.processor
    }

    pub fn prompts(&self) -> &PromptDb {
        &self.prompts
    }

    pub fn counters(&self) -> EngineCounters {
        EngineCounters {
            gate_rejections: self.counters.gate_rejections.load(Ordering::Relaxed),
            analyses_started: self.counters.analyses_started.load(Ordering::Relaxed),
            analyses_completed: self.counters.analyses_completed.load(Ordering::Relaxed),
        }
    }

    pub fn validate(&self, text: &str) -> GateResult {
        validate_submission(text, &self.processor, &self.config.gate)
    }

    pub fn resolve_seed(&self, text: &str, explicit: Option<u64>) -> u64 {
        explicit.unwrap_or_else(|| match self.config.seed_policy {
            SeedPolicy::Fixed(seed) => seed,
            SeedPolicy::TextHash => text_seed(text),
            SeedPolicy::Random => std::collections::hash_map::RandomState::new()
                .build_hasher()
                .finish(),
        })
    }

    /// Detected language, falling back to the configured default when the
    /// text is too short to tell.
    pub fn detect_language(&self, text: &str) -> Result<LanguageCode, TextError> {
        match self.processor.detect_language(text) {
            Ok((lang, _)) => Ok(lang),
            Err(TextError::TooShort(_)) => Ok(self.config.default_language.clone()),
            Err(e) => Err(e),
        }
    }

    /// Segments, tags and classifies `text`, which must be in a native
    /// language. The gate is not consulted.
    pub fn analyze_document(
        &self,
        text: &str,
        lang: &LanguageCode,
        clustering: ClusteringId,
    ) -> Result<AnalyzedDocument, AnalyzeError> {
        let backend = |port: &'static str| move |source| AnalyzeError::Backend { port, source };
        let sentences = self.processor.analyze(text, lang)?;
        let mut analyses = Vec::with_capacity(sentences.len());
        for sentence in &sentences {
            analyses.push(SentenceAnalysis {
                emotions: self.backends.emotion.predict_emotions(sentence, lang).map_err(backend("emotion"))?,
                gibbs: self.backends.gibbs.predict_gibbs(sentence, lang).map_err(backend("gibbs"))?,
                sentiment: self
                    .backends
                    .sentiment
                    .predict_sentiment(sentence, lang)
                    .map_err(backend("sentiment"))?,
                topic: self
                    .backends
                    .topic
                    .assign_topic(sentence, lang, clustering)
                    .map_err(backend("topic"))?,
            });
        }
        let mut doc = AnalyzedDocument {
            text: text.to_string(),
            language: lang.clone(),
            clustering,
            sentences,
            analyses,
            level: None,
        };
        doc.level = Some(
            self.backends
                .level
                .predict_reflective_level(&doc)
                .map_err(backend("level"))?,
        );
        Ok(doc)
    }

    /// Gate, language identification, analysis and feedback composition.
    pub fn analyze(&self, text: &str, options: &AnalyzeOptions) -> Result<FeedbackResponse, AnalyzeError> {
        let gate = self.validate(text);
        if !gate.accepted() {
            self.counters.gate_rejections.fetch_add(1, Ordering::Relaxed);
            return Err(AnalyzeError::GateRejected(gate));
        }
        self.counters.analyses_started.fetch_add(1, Ordering::Relaxed);

        let input_language = self.detect_language(text)?;
        let (analysis_text, analysis_language, input_fallback) = if input_language.is_native() {
            (text.to_string(), input_language.clone(), false)
        } else {
            let (translated, fallback) =
                translate_or_stub(self.translator.as_ref(), text, &input_language, &LanguageCode::De)?;
            (translated, LanguageCode::De, fallback)
        };
        let translated_input = analysis_language != input_language;

        let clustering = options.clustering.unwrap_or(self.config.clustering);
        let doc = self.analyze_document(&analysis_text, &analysis_language, clustering)?;
        let linguistic =
            score_document(&doc.sentences, self.connectors.for_language(&analysis_language)?)?;
        let mut profile = build_profile(&doc, linguistic, &self.config.reasoner)?;
        profile.language = input_language.clone();

        let seed = self.resolve_seed(text, options.seed);
        let plan = select_prompts(&profile, &self.prompts, &self.config.reasoner, seed)?;
        let target = options.feedback_language.clone().unwrap_or(input_language);
        let mut response = compose_feedback(
            &plan,
            &profile,
            &self.prompts,
            &self.config.reasoner,
            &target,
            self.translator.as_ref(),
        )?;
        response.annotations = SentenceAnnotation::for_document(&doc, !translated_input);
        response.translated_input = translated_input;
        response.translation_fallback |= input_fallback;
        self.counters.analyses_completed.fetch_add(1, Ordering::Relaxed);
        Ok(response)
    }
}
