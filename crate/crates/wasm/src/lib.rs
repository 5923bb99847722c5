//! Browser bindings for the feedback engine.
//!
//! Every export returns a JSON string so the page needs no generated
//! TypeScript types. The logic lives in plain functions that the native test
//! suite calls directly; the `#[wasm_bindgen]` wrappers only convert errors.

use reflector::classifiers::ClusteringId;
use reflector::gate::GateReason;
use reflector::metrics::{cohen_kappa, quadratic_weighted_kappa};
use reflector::reasoner::{FeedbackResponse, SourceModel, FEATURE_LABELS};
use reflector::{AnalyzeError, AnalyzeOptions, Engine, LanguageCode};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// A run of the submitted text, tagged when it is a sentence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Segment {
    pub text: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sentence: Option<SentenceTags>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct SentenceTags {
    pub index: usize,
    pub phase: String,
    pub sentiment: String,
    pub emotions: Vec<String>,
    pub topic: Option<String>,
}

#[derive(Debug, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum DemoResult {
    Feedback {
        text: String,
        vector: Vec<f64>,
        labels: Vec<&'static str>,
        language: LanguageCode,
        input_language: LanguageCode,
        reflective_level: u8,
        seed: u64,
        segments: Vec<Segment>,
    },
    RevisionRequest {
        reasons: Vec<GateReason>,
    },
}

fn tags_for(annotation: &reflector::reasoner::SentenceAnnotation) -> SentenceTags {
    let mut tags = SentenceTags {
        index: annotation.index,
        ..SentenceTags::default()
    };
    for tag in &annotation.tags {
        match tag.model {
            SourceModel::Gibbs => tags.phase = tag.label.clone(),
            SourceModel::Sentiment => tags.sentiment = tag.label.clone(),
            SourceModel::Emotion => tags.emotions.push(tag.label.clone()),
            SourceModel::Topic => tags.topic = Some(tag.label.clone()),
        }
    }
    tags
}

/// Splits `text` into alternating gap and sentence runs. Annotation spans are
/// character offsets, so the text is cut on chars; JavaScript never has to
/// map offsets onto its UTF-16 strings.
pub fn segments(text: &str, response: &FeedbackResponse) -> Vec<Segment> {
    let chars: Vec<char> = text.chars().collect();
    let cut = |from: usize, to: usize| chars[from..to].iter().collect::<String>();
    let mut out = Vec::new();
    let mut pos = 0;
    for annotation in &response.annotations {
        let Some(span) = annotation.span else {
            // Spans are dropped after translation; show the text untagged.
            return vec![Segment { text: text.to_string(), sentence: None }];
        };
        if span.start > pos {
            out.push(Segment { text: cut(pos, span.start), sentence: None });
        }
        out.push(Segment {
            text: cut(span.start, span.end),
            sentence: Some(tags_for(annotation)),
        });
        pos = span.end;
    }
    if pos < chars.len() {
        out.push(Segment { text: cut(pos, chars.len()), sentence: None });
    }
    out
}

pub fn analyze_text(
    engine: &Engine,
    text: &str,
    seed: Option<u64>,
    lang: Option<&str>,
    clustering: Option<&str>,
) -> Result<DemoResult, String> {
    let feedback_language = match lang.filter(|l| !l.is_empty()) {
        Some(l) => Some(l.parse::<LanguageCode>().map_err(|e| e.to_string())?),
        None => None,
    };
    let clustering = match clustering.filter(|c| !c.is_empty()) {
        Some(c) => Some(c.parse::<ClusteringId>()?),
        None => None,
    };
    let options = AnalyzeOptions { seed, clustering, feedback_language };
    match engine.analyze(text, &options) {
        Ok(response) => Ok(DemoResult::Feedback {
            segments: segments(text, &response),
            text: response.text,
            vector: response.feature_vector,
            labels: FEATURE_LABELS.to_vec(),
            language: response.language,
            input_language: response.input_language,
            reflective_level: response.reflective_level.ordinal(),
            seed: response.plan.seed,
        }),
        Err(AnalyzeError::GateRejected(gate)) => Ok(DemoResult::RevisionRequest { reasons: gate.reasons }),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Debug, Serialize)]
pub struct LanguageGuess {
    pub language: LanguageCode,
    pub confidence: f64,
}

pub fn guess_language(engine: &Engine, text: &str) -> Result<LanguageGuess, String> {
    engine
        .processor()
        .detect_language(text)
        .map(|(language, confidence)| LanguageGuess { language, confidence })
        .map_err(|e| e.to_string())
}

#[derive(Debug, Serialize)]
pub struct Agreement {
    pub items: usize,
    pub cohen_kappa: f64,
    pub quadratic_weighted_kappa: f64,
}

/// Parses whitespace or comma separated ordinal ratings.
pub fn parse_ratings(input: &str) -> Result<Vec<u32>, String> {
    input
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<u32>().map_err(|_| format!("not a rating: {s:?}")))
        .collect()
}

/// Agreement between two raters on ordinal categories `1..=k`.
pub fn agreement(a: &str, b: &str, k: u32) -> Result<Agreement, String> {
    let a = parse_ratings(a)?;
    let b = parse_ratings(b)?;
    Ok(Agreement {
        items: a.len(),
        cohen_kappa: cohen_kappa(&a, &b).map_err(|e| e.to_string())?,
        quadratic_weighted_kappa: quadratic_weighted_kappa(&a, &b, k).map_err(|e| e.to_string())?,
    })
}

fn to_json<T: Serialize>(value: Result<T, String>) -> Result<String, JsValue> {
    value
        .and_then(|v| serde_json::to_string(&v).map_err(|e| e.to_string()))
        .map_err(|e| JsValue::from_str(&e))
}

/// The engine with its bundled lexicons, loaded once per page.
#[wasm_bindgen]
pub struct Demo {
    engine: Engine,
}

#[wasm_bindgen]
impl Demo {
    #[wasm_bindgen(constructor)]
    pub fn new() -> Result<Demo, JsValue> {
        Engine::bundled()
            .map(|engine| Demo { engine })
            .map_err(|e| JsValue::from_str(&e.to_string()))
    }

    /// Feedback, radar vector and highlighted sentences as JSON. An empty
    /// `lang` answers in the detected language.
    pub fn analyze(&self, text: &str, seed: Option<u32>, lang: &str) -> Result<String, JsValue> {
        to_json(analyze_text(&self.engine, text, seed.map(u64::from), Some(lang), None))
    }

    #[wasm_bindgen(js_name = detectLanguage)]
    pub fn detect_language(&self, text: &str) -> Result<String, JsValue> {
        to_json(guess_language(&self.engine, text))
    }
}

/// Cohen's kappa and QWK for two rating lists, as JSON.
#[wasm_bindgen(js_name = raterAgreement)]
pub fn rater_agreement(a: &str, b: &str, k: u32) -> Result<String, JsValue> {
    to_json(agreement(a, b, k))
}
