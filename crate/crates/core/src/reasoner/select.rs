use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::prompts::{LinguisticRule, PromptDb, Trigger};
use super::{least_present_phases, LintIssue, ReasonerConfig, ReasonerError, SentimentSummary, TextProfile};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanItem {
    pub trigger: Trigger,
    pub record_id: String,
    pub variant: usize,
}

/// Prompts chosen for one response, in presentation order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeedbackPlan {
    pub selected: Vec<PlanItem>,
    pub seed: u64,
}

impl FeedbackPlan {
    pub fn triggers(&self) -> impl Iterator<Item = Trigger> + '_ {
        self.selected.iter().map(|i| i.trigger)
    }

    pub fn contains(&self, trigger: Trigger) -> bool {
        self.triggers().any(|t| t == trigger)
    }
}

/// Linguistic rules the profile falls short of, in fixed rule order.
pub fn triggered_rules(profile: &TextProfile, config: &ReasonerConfig) -> Vec<LinguisticRule> {
    let ling = &profile.linguistic;
    let t = &config.thresholds;
    LinguisticRule::ALL
        .into_iter()
        .filter(|rule| match rule {
            LinguisticRule::Brevity => ling.mean_sentence_length < t.min_mean_sentence_length,
            LinguisticRule::Coherence => ling.connector_density < t.min_connector_density,
            LinguisticRule::Expressivity => {
                ling.adjective_noun_ratio < t.min_adjective_noun_ratio
                    && ling.adverb_verb_ratio < t.min_adverb_verb_ratio
            }
            LinguisticRule::Variability => ling.lexical_variability < t.min_lexical_variability,
        })
        .collect()
}

pub fn select_prompts(
    profile: &TextProfile,
    db: &PromptDb,
    config: &ReasonerConfig,
    seed: u64,
) -> Result<FeedbackPlan, ReasonerError> {
    let mut triggers: Vec<Trigger> = least_present_phases(profile)
        .into_iter()
        .map(Trigger::GibbsMissing)
        .collect();
    triggers.extend(triggered_rules(profile, config).into_iter().map(Trigger::Linguistic));
    match profile.sentiment_summary {
        SentimentSummary::AllPositive => triggers.push(Trigger::SentimentChallenge),
        SentimentSummary::AllNegative => triggers.push(Trigger::SentimentOptimism),
        SentimentSummary::Mixed | SentimentSummary::AllNeutral => {}
    }
    triggers.push(Trigger::Level(profile.reflective_level.next()));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut selected = Vec::with_capacity(triggers.len());
    let mut gaps = Vec::new();
    for trigger in triggers {
        let Some(record) = db.for_trigger(trigger) else {
            gaps.push(LintIssue::MissingTrigger { trigger });
            continue;
        };
        let variant = rng.gen_range(0..record.parallel_variant_count());
        selected.push(PlanItem {
            trigger,
            record_id: record.id.clone(),
            variant,
        });
    }
    if !gaps.is_empty() {
        return Err(ReasonerError::PromptGap(gaps));
    }
    Ok(FeedbackPlan { selected, seed })
}
