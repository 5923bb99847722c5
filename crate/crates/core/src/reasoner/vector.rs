use crate::classifiers::GibbsPhase;

use super::TextProfile;

/// Bumped whenever the layout below changes.
pub const FEATURE_VECTOR_VERSION: u32 = 1;
pub const FEATURE_VECTOR_LEN: usize = 12;

pub const FEATURE_LABELS: [&str; FEATURE_VECTOR_LEN] = [
    "description",
    "feelings",
    "evaluation",
    "analysis",
    "conclusion",
    "future_plans",
    "sentence_length",
    "adverb_verb_ratio",
    "adjective_noun_ratio",
    "connector_density",
    "lexical_variability",
    "reflective_level",
];

/// Radar vector: six Gibbs coverages in phase order, five normalized
/// linguistic features, and the reflective level over five.
pub fn export_feature_vector(profile: &TextProfile, sentence_length_cap: f64) -> Vec<f64> {
    let unit = |x: f64| if x.is_finite() { x.clamp(0.0, 1.0) } else { 0.0 };
    let ling = &profile.linguistic;
    let mut out: Vec<f64> = GibbsPhase::ALL.iter().map(|p| unit(profile.coverage(*p))).collect();
    out.push(unit(ling.mean_sentence_length / sentence_length_cap));
    out.push(unit(ling.adverb_verb_ratio));
    out.push(unit(ling.adjective_noun_ratio));
    out.push(unit(ling.connector_density));
    out.push(unit(ling.lexical_variability));
    out.push(f64::from(profile.reflective_level.ordinal()) / 5.0);
    out
}
