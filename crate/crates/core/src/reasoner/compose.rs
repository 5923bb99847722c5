use serde::{Deserialize, Serialize};

use super::prompts::{placeholder_names, PromptDb, PromptRecord, Trigger};
use super::select::{FeedbackPlan, PlanItem};
use super::vector::{export_feature_vector, FEATURE_VECTOR_VERSION};
use super::{LintIssue, ReasonerConfig, ReasonerError, TextProfile};
use crate::classifiers::{GibbsPhase, ReflectiveLevel};
use crate::document::AnalyzedDocument;
use crate::lang::LanguageCode;
use crate::textproc::{translate_or_stub, Span, TranslatorPort};

/// Which classifier produced a highlight; the UI colours by this.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceModel {
    Emotion,
    Gibbs,
    Sentiment,
    Topic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelTag {
    pub model: SourceModel,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentenceAnnotation {
    pub index: usize,
    /// Character offsets into the submitted text. Absent when the analysis
    /// ran on a translation and offsets would not line up.
    pub span: Option<Span>,
    pub tags: Vec<ModelTag>,
}

impl SentenceAnnotation {
    /// One annotation per sentence; spans are kept only when `doc.text` is
    /// the text the user submitted.
    pub fn for_document(doc: &AnalyzedDocument, with_spans: bool) -> Vec<SentenceAnnotation> {
        doc.sentences
            .iter()
            .zip(&doc.analyses)
            .map(|(sentence, analysis)| {
                let mut tags: Vec<ModelTag> = analysis
                    .emotions
                    .labels
                    .iter()
                    .map(|l| ModelTag { model: SourceModel::Emotion, label: l.to_string() })
                    .collect();
                tags.push(ModelTag {
                    model: SourceModel::Gibbs,
                    label: analysis.gibbs.argmax().to_string(),
                });
                tags.push(ModelTag {
                    model: SourceModel::Sentiment,
                    label: analysis.sentiment.to_string(),
                });
                if let Some(topic) = &analysis.topic.topic {
                    tags.push(ModelTag { model: SourceModel::Topic, label: topic.clone() });
                }
                SentenceAnnotation {
                    index: sentence.index,
                    span: with_spans.then(|| sentence.span.to_char_span(&doc.text)),
                    tags,
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeedbackResponse {
    pub text: String,
    pub feature_vector: Vec<f64>,
    pub vector_version: u32,
    pub annotations: Vec<SentenceAnnotation>,
    /// Language of `text`.
    pub language: LanguageCode,
    /// Language detected in the submission.
    pub input_language: LanguageCode,
    pub reflective_level: ReflectiveLevel,
    pub plan: FeedbackPlan,
    /// Set when the submission was translated before analysis.
    pub translated_input: bool,
    /// Set when a translation fell back to the offline stub.
    pub translation_fallback: bool,
}

pub fn phase_name(phase: GibbsPhase, lang: &LanguageCode) -> &'static str {
    use GibbsPhase::*;
    match (lang, phase) {
        (LanguageCode::En, Description) => "description",
        (LanguageCode::En, Feelings) => "feelings",
        (LanguageCode::En, Evaluation) => "evaluation",
        (LanguageCode::En, Analysis) => "analysis",
        (LanguageCode::En, Conclusion) => "conclusion",
        (LanguageCode::En, FuturePlans) => "future plans",
        (LanguageCode::Es, Description) => "descripción",
        (LanguageCode::Es, Feelings) => "sentimientos",
        (LanguageCode::Es, Evaluation) => "evaluación",
        (LanguageCode::Es, Analysis) => "análisis",
        (LanguageCode::Es, Conclusion) => "conclusión",
        (LanguageCode::Es, FuturePlans) => "planes de futuro",
        (_, Description) => "Beschreibung",
        (_, Feelings) => "Gefühle",
        (_, Evaluation) => "Bewertung",
        (_, Analysis) => "Analyse",
        (_, Conclusion) => "Schlussfolgerung",
        (_, FuturePlans) => "Zukunftspläne",
    }
}

pub fn level_name(level: ReflectiveLevel, lang: &LanguageCode) -> &'static str {
    use ReflectiveLevel::*;
    match (lang, level) {
        (LanguageCode::En, Description) => "description",
        (LanguageCode::En, ReflectiveDescription) => "reflective description",
        (LanguageCode::En, DialogicalReflection) => "dialogical reflection",
        (LanguageCode::En, TransformativeReflection) => "transformative reflection",
        (LanguageCode::En, CriticalReflection) => "critical reflection",
        (LanguageCode::Es, Description) => "descripción",
        (LanguageCode::Es, ReflectiveDescription) => "descripción reflexiva",
        (LanguageCode::Es, DialogicalReflection) => "reflexión dialógica",
        (LanguageCode::Es, TransformativeReflection) => "reflexión transformadora",
        (LanguageCode::Es, CriticalReflection) => "reflexión crítica",
        (_, Description) => "Beschreibung",
        (_, ReflectiveDescription) => "reflektierende Beschreibung",
        (_, DialogicalReflection) => "dialogische Reflexion",
        (_, TransformativeReflection) => "transformative Reflexion",
        (_, CriticalReflection) => "kritische Reflexion",
    }
}

struct Frame {
    greeting: &'static str,
    strongest: &'static str,
    well_thought: &'static str,
    improvements: &'static str,
    closing: &'static str,
}

fn frame(lang: &LanguageCode) -> Frame {
    match lang {
        LanguageCode::En => Frame {
            greeting: "Thank you for your reflection!",
            strongest: "Your text is strongest in the {phase} phase.",
            well_thought: "You have thought these topics through carefully: {topics}.",
            improvements: "To deepen your reflection, consider the following:",
            closing: "Keep it up, we look forward to your next reflection.",
        },
        LanguageCode::Es => Frame {
            greeting: "¡Gracias por tu reflexión!",
            strongest: "Tu texto destaca sobre todo en la fase de {phase}.",
            well_thought: "Has reflexionado a fondo sobre estos temas: {topics}.",
            improvements: "Para profundizar tu reflexión, ten en cuenta lo siguiente:",
            closing: "Sigue así, esperamos con interés tu próxima reflexión.",
        },
        _ => Frame {
            greeting: "Vielen Dank für deine Reflexion!",
            strongest: "Besonders ausgeprägt ist in deinem Text die Phase {phase}.",
            well_thought: "Gründlich durchdacht hast du diese Themen: {topics}.",
            improvements: "Um deine Reflexion zu vertiefen, beachte Folgendes:",
            closing: "Mach weiter so, wir freuen uns auf deine nächste Reflexion.",
        },
    }
}

fn placeholder_value(
    name: &str,
    item: &PlanItem,
    profile: &TextProfile,
    lang: &LanguageCode,
) -> Option<String> {
    let level = match item.trigger {
        Trigger::Level(target) => target,
        _ => profile.reflective_level,
    };
    match name {
        "phase" => match item.trigger {
            Trigger::GibbsMissing(p) => Some(phase_name(p, lang).to_string()),
            _ => None,
        },
        "level" => Some(level.ordinal().to_string()),
        "level_name" => Some(level_name(level, lang).to_string()),
        "mean_length" => Some(format!("{:.1}", profile.linguistic.mean_sentence_length)),
        "sentence_count" => Some(profile.sentence_count().to_string()),
        "topic" => profile
            .well_thought_topics()
            .chain(profile.topics.iter())
            .next()
            .map(|t| t.topic.clone()),
        _ => None,
    }
}

fn render(
    record: &PromptRecord,
    item: &PlanItem,
    profile: &TextProfile,
    lang: &LanguageCode,
) -> Result<String, ReasonerError> {
    let gap = || {
        ReasonerError::PromptGap(vec![LintIssue::TooFewVariants {
            id: record.id.clone(),
            lang: lang.to_string(),
            count: record.variants_for(lang).map_or(0, <[String]>::len),
        }])
    };
    let template = record.variants_for(lang).and_then(|v| v.get(item.variant)).ok_or_else(gap)?;
    let mut out = template.clone();
    for name in placeholder_names(template) {
        let value = placeholder_value(name, item, profile, lang).ok_or_else(|| {
            ReasonerError::UnresolvedPlaceholder { record: record.id.clone(), name: name.to_string() }
        })?;
        out = out.replacen(&format!("{{{name}}}"), &value, 1);
    }
    Ok(out)
}

fn compose_native(
    plan: &FeedbackPlan,
    profile: &TextProfile,
    db: &PromptDb,
    lang: &LanguageCode,
) -> Result<String, ReasonerError> {
    let frame = frame(lang);
    let mut lines = vec![frame.greeting.to_string()];
    lines.push(frame.strongest.replace("{phase}", phase_name(profile.strongest_phase(), lang)));
    let topics: Vec<&str> = profile.well_thought_topics().map(|t| t.topic.as_str()).collect();
    if !topics.is_empty() {
        lines.push(frame.well_thought.replace("{topics}", &topics.join(", ")));
    }
    lines.push(frame.improvements.to_string());
    for item in &plan.selected {
        let record = db.get(&item.record_id).ok_or_else(|| {
            ReasonerError::PromptGap(vec![LintIssue::MissingTrigger { trigger: item.trigger }])
        })?;
        lines.push(format!("- {}", render(record, item, profile, lang)?));
    }
    lines.push(frame.closing.to_string());
    Ok(lines.join("\n"))
}

/// Assembles the feedback message. Languages without templates get the
/// German message routed through `translator`.
pub fn compose_feedback(
    plan: &FeedbackPlan,
    profile: &TextProfile,
    db: &PromptDb,
    config: &ReasonerConfig,
    target: &LanguageCode,
    translator: &dyn TranslatorPort,
) -> Result<FeedbackResponse, ReasonerError> {
    let (text, translation_fallback) = if target.is_native() {
        (compose_native(plan, profile, db, target)?, false)
    } else {
        let german = compose_native(plan, profile, db, &LanguageCode::De)?;
        translate_or_stub(translator, &german, &LanguageCode::De, target)?
    };
    Ok(FeedbackResponse {
        text,
        feature_vector: export_feature_vector(profile, config.sentence_length_cap),
        vector_version: FEATURE_VECTOR_VERSION,
        annotations: Vec::new(),
        language: target.clone(),
        input_language: profile.language.clone(),
        reflective_level: profile.reflective_level,
        plan: plan.clone(),
        translated_input: false,
        translation_fallback,
    })
}
