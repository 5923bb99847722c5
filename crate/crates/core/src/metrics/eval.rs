//! Scoring a prediction file against a gold file.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::{
    cohen_kappa, f1_scores, hamming_score, jaccard_score, lenient_hamming_score,
    multilabel_micro_f1, one_correct_label_accuracy, quadratic_weighted_kappa, MetricError,
    MultiLabelSample, SimilarityGroups,
};
use crate::classifiers::{EmotionLabel, GibbsPhase};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalTask {
    Emotions,
    Gibbs,
    Level,
}

impl FromStr for EvalTask {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "emotions" => Ok(EvalTask::Emotions),
            "gibbs" => Ok(EvalTask::Gibbs),
            "level" => Ok(EvalTask::Level),
            _ => Err(format!("unknown task {s:?}: expected emotions, gibbs or level")),
        }
    }
}

impl fmt::Display for EvalTask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EvalTask::Emotions => "emotions",
            EvalTask::Gibbs => "gibbs",
            EvalTask::Level => "level",
        })
    }
}

/// How the headline multi-label score is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HammingVariant {
    /// `1 - |gold xor predicted| / scheme_size`.
    #[default]
    Symmetric,
    /// Mean `|gold and predicted| / |gold or predicted|`.
    Jaccard,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvalConfig {
    pub emotion_scheme_size: usize,
    pub hamming_variant: HammingVariant,
    pub lenient_groups: Vec<BTreeSet<EmotionLabel>>,
    pub level_categories: u32,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            emotion_scheme_size: EmotionLabel::ALL.len(),
            hamming_variant: HammingVariant::Symmetric,
            lenient_groups: vec![BTreeSet::from([
                EmotionLabel::Disappointment,
                EmotionLabel::DisapprovalCritique,
            ])],
            level_categories: 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub task: EvalTask,
    pub label_scheme: String,
    pub sample_count: usize,
    pub metrics: BTreeMap<String, f64>,
}

impl EvalReport {
    /// `self - baseline` for every metric both reports share, in absolute
    /// points.
    pub fn delta(&self, baseline: &EvalReport) -> BTreeMap<String, f64> {
        self.metrics
            .iter()
            .filter_map(|(k, v)| baseline.metrics.get(k).map(|b| (k.clone(), v - b)))
            .collect()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}:{line}: {message}", path.display())]
    Schema { path: PathBuf, line: usize, message: String },
    #[error("sample ids do not align: {0}")]
    IdMismatch(String),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LabelsRecord<L> {
    id: String,
    labels: Vec<L>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GibbsGold {
    id: String,
    label: GibbsPhase,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GibbsPrediction {
    Top1 { id: String, label: GibbsPhase },
    Top3 { id: String, top3: Vec<GibbsPhase> },
}

impl GibbsPrediction {
    fn id(&self) -> &str {
        match self {
            GibbsPrediction::Top1 { id, .. } | GibbsPrediction::Top3 { id, .. } => id,
        }
    }

    fn ranked(&self) -> Vec<GibbsPhase> {
        match self {
            GibbsPrediction::Top1 { label, .. } => vec![*label],
            GibbsPrediction::Top3 { top3, .. } => top3.clone(),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LevelRecord {
    id: String,
    level: u32,
}

fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>, EvalError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| EvalError::Io { path: path.to_path_buf(), source })?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str(line).map_err(|e| EvalError::Schema {
            path: path.to_path_buf(),
            line: i + 1,
            message: e.to_string(),
        })?;
        out.push(record);
    }
    Ok(out)
}

/// Pairs gold and predicted records by id, in gold order. Both sides must
/// hold exactly the same ids.
fn align<G, P>(
    gold: Vec<G>,
    pred: Vec<P>,
    gold_id: impl Fn(&G) -> &str,
    pred_id: impl Fn(&P) -> &str,
) -> Result<Vec<(G, P)>, EvalError> {
    let mut by_id: HashMap<String, P> = HashMap::new();
    for p in pred {
        let id = pred_id(&p).to_string();
        if by_id.insert(id.clone(), p).is_some() {
            return Err(EvalError::IdMismatch(format!("duplicate prediction id {id}")));
        }
    }
    let mut seen = BTreeSet::new();
    let mut pairs = Vec::with_capacity(gold.len());
    for g in gold {
        let id = gold_id(&g).to_string();
        if !seen.insert(id.clone()) {
            return Err(EvalError::IdMismatch(format!("duplicate gold id {id}")));
        }
        let p = by_id
            .remove(&id)
            .ok_or_else(|| EvalError::IdMismatch(format!("no prediction for {id}")))?;
        pairs.push((g, p));
    }
    if let Some(extra) = by_id.keys().min() {
        return Err(EvalError::IdMismatch(format!("prediction {extra} has no gold record")));
    }
    if pairs.is_empty() {
        return Err(EvalError::Metric(MetricError::EmptyInput));
    }
    Ok(pairs)
}

pub fn evaluate_run(
    gold_file: &Path,
    prediction_file: &Path,
    task: EvalTask,
    config: &EvalConfig,
) -> Result<EvalReport, EvalError> {
    let mut metrics = BTreeMap::new();
    let (sample_count, label_scheme) = match task {
        EvalTask::Emotions => {
            let pairs = align(
                read_jsonl::<LabelsRecord<EmotionLabel>>(gold_file)?,
                read_jsonl::<LabelsRecord<EmotionLabel>>(prediction_file)?,
                |g| &g.id,
                |p| &p.id,
            )?;
            let samples: Vec<MultiLabelSample<EmotionLabel>> = pairs
                .into_iter()
                .map(|(g, p)| MultiLabelSample::new(g.labels, p.labels))
                .collect();
            let groups = SimilarityGroups::new(config.lenient_groups.clone())?;
            let size = config.emotion_scheme_size;
            metrics.insert("f1_micro".into(), multilabel_micro_f1(&samples)?);
            let hamming = match config.hamming_variant {
                HammingVariant::Symmetric => hamming_score(&samples, size)?,
                HammingVariant::Jaccard => jaccard_score(&samples)?,
            };
            metrics.insert("hamming".into(), hamming);
            metrics.insert("lenient_hamming".into(), lenient_hamming_score(&samples, size, &groups)?);
            metrics.insert("one_correct_label".into(), one_correct_label_accuracy(&samples)?);
            (samples.len(), format!("emotions/{size}"))
        }
        EvalTask::Gibbs => {
            let pairs = align(
                read_jsonl::<GibbsGold>(gold_file)?,
                read_jsonl::<GibbsPrediction>(prediction_file)?,
                |g| &g.id,
                |p| p.id(),
            )?;
            let gold: Vec<GibbsPhase> = pairs.iter().map(|(g, _)| g.label).collect();
            let mut top1 = Vec::with_capacity(pairs.len());
            let mut top3 = Vec::with_capacity(pairs.len());
            for (g, p) in &pairs {
                let ranked = p.ranked();
                let Some(first) = ranked.first().copied() else {
                    return Err(EvalError::Schema {
                        path: prediction_file.to_path_buf(),
                        line: 0,
                        message: format!("{}: empty top3 list", g.id),
                    });
                };
                top1.push(first);
                top3.push(if ranked.iter().take(3).any(|r| *r == g.label) { g.label } else { first });
            }
            let strict = f1_scores(&gold, &top1)?;
            let lenient = f1_scores(&gold, &top3)?;
            metrics.insert("f1_macro_top1".into(), strict.macro_f1);
            metrics.insert("f1_micro_top1".into(), strict.micro_f1);
            metrics.insert("f1_macro_top3".into(), lenient.macro_f1);
            metrics.insert("f1_micro_top3".into(), lenient.micro_f1);
            (gold.len(), "gibbs/6".to_string())
        }
        EvalTask::Level => {
            let pairs = align(
                read_jsonl::<LevelRecord>(gold_file)?,
                read_jsonl::<LevelRecord>(prediction_file)?,
                |g| &g.id,
                |p| &p.id,
            )?;
            let (gold, pred): (Vec<u32>, Vec<u32>) =
                pairs.iter().map(|(g, p)| (g.level, p.level)).unzip();
            metrics.insert("qwk".into(), quadratic_weighted_kappa(&gold, &pred, config.level_categories)?);
            metrics.insert("cohen_kappa".into(), cohen_kappa(&gold, &pred)?);
            (gold.len(), format!("level/{}", config.level_categories))
        }
    };
    Ok(EvalReport { task, label_scheme, sample_count, metrics })
}
