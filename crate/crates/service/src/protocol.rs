//! JSON messages exchanged over `/ws` and `POST /api/analyze`.

use reflector::classifiers::{ClusteringId, ReflectiveLevel};
use reflector::gate::GateReason;
use reflector::reasoner::{FeedbackResponse, SentenceAnnotation};
use reflector::{AnalyzeOptions, LanguageCode};
use serde::{Deserialize, Serialize};

pub const ANONYMOUS: &str = "anonymous";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalyzeRequest {
    pub text: String,
    #[serde(default)]
    pub seed: Option<u64>,
    /// Requested feedback language.
    #[serde(default)]
    pub lang: Option<LanguageCode>,
    #[serde(default)]
    pub clustering: Option<ClusteringId>,
    #[serde(default)]
    pub author: Option<String>,
    /// Client-side submission time in Unix milliseconds.
    #[serde(default)]
    pub submitted_at: Option<u64>,
}

impl AnalyzeRequest {
    pub fn new(text: impl Into<String>) -> Self {
        AnalyzeRequest {
            text: text.into(),
            seed: None,
            lang: None,
            clustering: None,
            author: None,
            submitted_at: None,
        }
    }

    pub fn options(&self) -> AnalyzeOptions {
        AnalyzeOptions {
            seed: self.seed,
            clustering: self.clustering,
            feedback_language: self.lang.clone(),
        }
    }

    pub fn author(&self) -> &str {
        self.author.as_deref().filter(|a| !a.is_empty()).unwrap_or(ANONYMOUS)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ClientMessage {
    Analyze(AnalyzeRequest),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCode {
    InvalidRequest,
    TextTooLong,
    UnsupportedInput,
    BackendFailure,
    Overloaded,
    Internal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeedbackMessage {
    pub text: String,
    pub vector: Vec<f64>,
    pub vector_version: u32,
    pub annotations: Vec<SentenceAnnotation>,
    pub language: LanguageCode,
    pub input_language: LanguageCode,
    pub reflective_level: ReflectiveLevel,
    pub seed: u64,
    pub translated_input: bool,
    pub translation_fallback: bool,
    /// History id; absent when the reflection could not be stored.
    pub id: Option<u64>,
    pub persisted: bool,
}

impl FeedbackMessage {
    pub fn new(response: FeedbackResponse, id: Option<u64>) -> Self {
        FeedbackMessage {
            seed: response.plan.seed,
            text: response.text,
            vector: response.feature_vector,
            vector_version: response.vector_version,
            annotations: response.annotations,
            language: response.language,
            input_language: response.input_language,
            reflective_level: response.reflective_level,
            translated_input: response.translated_input,
            translation_fallback: response.translation_fallback,
            id,
            persisted: id.is_some(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ServerMessage {
    Feedback(FeedbackMessage),
    RevisionRequest { reasons: Vec<GateReason> },
    Error { code: ErrorCode, message: String },
}

impl ServerMessage {
    pub fn error(code: ErrorCode, message: impl Into<String>) -> Self {
        ServerMessage::Error { code, message: message.into() }
    }
}
