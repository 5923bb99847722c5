//! Evaluation metrics for single-label, multi-label and ordinal runs.
//!
//! Every function is pure and generic over the label type, so the same code
//! scores emotion labels, Gibbs phases or plain strings.

mod eval;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

pub use eval::{evaluate_run, EvalConfig, EvalError, EvalReport, EvalTask, HammingVariant};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MetricError {
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("no samples")]
    EmptyInput,
    #[error("sample {index} has an empty label set")]
    EmptyLabelSet { index: usize },
    #[error("label {0} appears in more than one similarity group")]
    OverlappingGroups(String),
    #[error("an ordinal scale needs at least two categories")]
    SingleCategory,
    #[error("ordinal {value} outside 1..={k}")]
    OrdinalOutOfRange { value: u32, k: u32 },
    #[error("scheme size {scheme_size} is smaller than a sample's label count")]
    SchemeTooSmall { scheme_size: usize },
}

/// Gold and predicted label sets for one item.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiLabelSample<L: Ord> {
    pub gold: BTreeSet<L>,
    pub predicted: BTreeSet<L>,
}

impl<L: Ord> MultiLabelSample<L> {
    pub fn new(gold: impl IntoIterator<Item = L>, predicted: impl IntoIterator<Item = L>) -> Self {
        MultiLabelSample {
            gold: gold.into_iter().collect(),
            predicted: predicted.into_iter().collect(),
        }
    }
}

/// Disjoint sets of labels that count as interchangeable for the lenient
/// hamming score.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(deserialize = "L: Ord + Deserialize<'de>"))]
pub struct SimilarityGroups<L: Ord> {
    groups: Vec<BTreeSet<L>>,
}

impl<L: Ord + Clone + std::fmt::Display> SimilarityGroups<L> {
    pub fn new(groups: Vec<BTreeSet<L>>) -> Result<Self, MetricError> {
        let mut seen = BTreeSet::new();
        for label in groups.iter().flatten() {
            if !seen.insert(label) {
                return Err(MetricError::OverlappingGroups(label.to_string()));
            }
        }
        Ok(SimilarityGroups { groups })
    }

    pub fn empty() -> Self {
        SimilarityGroups { groups: Vec::new() }
    }

    pub fn groups(&self) -> &[BTreeSet<L>] {
        &self.groups
    }

    fn group_of(&self, label: &L) -> Option<usize> {
        self.groups.iter().position(|g| g.contains(label))
    }
}

fn check_lengths(left: usize, right: usize) -> Result<(), MetricError> {
    if left != right {
        return Err(MetricError::LengthMismatch { left, right });
    }
    if left == 0 {
        return Err(MetricError::EmptyInput);
    }
    Ok(())
}

fn check_samples<L: Ord>(samples: &[MultiLabelSample<L>]) -> Result<(), MetricError> {
    if samples.is_empty() {
        return Err(MetricError::EmptyInput);
    }
    match samples.iter().position(|s| s.gold.is_empty() || s.predicted.is_empty()) {
        Some(index) => Err(MetricError::EmptyLabelSet { index }),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct F1Scores {
    pub macro_f1: f64,
    pub micro_f1: f64,
}

fn f1(tp: usize, fp: usize, fn_: usize) -> f64 {
    let denominator = 2 * tp + fp + fn_;
    if denominator == 0 {
        0.0
    } else {
        (2 * tp) as f64 / denominator as f64
    }
}

/// Macro and micro F1 for single-label predictions. Classes that never
/// occur in gold or predictions are excluded from the macro average.
pub fn f1_scores<L: Ord>(gold: &[L], predicted: &[L]) -> Result<F1Scores, MetricError> {
    check_lengths(gold.len(), predicted.len())?;
    // (tp, fp, fn) per class.
    let mut counts: BTreeMap<&L, (usize, usize, usize)> = BTreeMap::new();
    for (g, p) in gold.iter().zip(predicted) {
        if g == p {
            counts.entry(g).or_default().0 += 1;
        } else {
            counts.entry(p).or_default().1 += 1;
            counts.entry(g).or_default().2 += 1;
        }
    }
    let macro_f1 =
        counts.values().map(|&(tp, fp, fn_)| f1(tp, fp, fn_)).sum::<f64>() / counts.len() as f64;
    let (tp, fp, fn_) = counts
        .values()
        .fold((0, 0, 0), |acc, c| (acc.0 + c.0, acc.1 + c.1, acc.2 + c.2));
    Ok(F1Scores { macro_f1, micro_f1: f1(tp, fp, fn_) })
}

/// Micro F1 over label decisions pooled across multi-label samples.
pub fn multilabel_micro_f1<L: Ord>(samples: &[MultiLabelSample<L>]) -> Result<f64, MetricError> {
    check_samples(samples)?;
    let (mut tp, mut fp, mut fn_) = (0, 0, 0);
    for s in samples {
        tp += s.gold.intersection(&s.predicted).count();
        fp += s.predicted.difference(&s.gold).count();
        fn_ += s.gold.difference(&s.predicted).count();
    }
    Ok(f1(tp, fp, fn_))
}

fn mean_loss<L: Ord>(
    samples: &[MultiLabelSample<L>],
    scheme_size: usize,
    mut wrong: impl FnMut(&MultiLabelSample<L>) -> usize,
) -> Result<f64, MetricError> {
    check_samples(samples)?;
    let mut total = 0.0;
    for s in samples {
        if s.gold.union(&s.predicted).count() > scheme_size {
            return Err(MetricError::SchemeTooSmall { scheme_size });
        }
        total += wrong(s) as f64 / scheme_size as f64;
    }
    Ok(total / samples.len() as f64)
}

/// Mean share of the scheme's labels decided wrongly.
pub fn hamming_loss<L: Ord>(
    samples: &[MultiLabelSample<L>],
    scheme_size: usize,
) -> Result<f64, MetricError> {
    mean_loss(samples, scheme_size, |s| s.gold.symmetric_difference(&s.predicted).count())
}

/// `1 - hamming_loss`, so that higher is better.
pub fn hamming_score<L: Ord>(
    samples: &[MultiLabelSample<L>],
    scheme_size: usize,
) -> Result<f64, MetricError> {
    Ok(1.0 - hamming_loss(samples, scheme_size)?)
}

/// Hamming score after crediting near misses: each predicted label not in
/// gold takes the place of a still unmatched gold label from its similarity
/// group. Predictions are visited in label order and each gold label can be
/// taken once.
pub fn lenient_hamming_score<L: Ord + Clone + std::fmt::Display>(
    samples: &[MultiLabelSample<L>],
    scheme_size: usize,
    groups: &SimilarityGroups<L>,
) -> Result<f64, MetricError> {
    let loss = mean_loss(samples, scheme_size, |s| {
        let mut unmatched_gold: Vec<&L> = s.gold.difference(&s.predicted).collect();
        let mut substituted = 0;
        for p in s.predicted.difference(&s.gold) {
            let Some(group) = groups.group_of(p) else { continue };
            if let Some(pos) = unmatched_gold.iter().position(|g| groups.group_of(g) == Some(group)) {
                unmatched_gold.remove(pos);
                substituted += 1;
            }
        }
        s.gold.symmetric_difference(&s.predicted).count() - 2 * substituted
    })?;
    Ok(1.0 - loss)
}

/// Mean Jaccard similarity of gold and predicted sets; an alternative
/// reading of the multi-label score.
pub fn jaccard_score<L: Ord>(samples: &[MultiLabelSample<L>]) -> Result<f64, MetricError> {
    check_samples(samples)?;
    let total: f64 = samples
        .iter()
        .map(|s| {
            s.gold.intersection(&s.predicted).count() as f64
                / s.gold.union(&s.predicted).count() as f64
        })
        .sum();
    Ok(total / samples.len() as f64)
}

/// Share of samples whose prediction contains at least one gold label.
pub fn one_correct_label_accuracy<L: Ord>(
    samples: &[MultiLabelSample<L>],
) -> Result<f64, MetricError> {
    check_samples(samples)?;
    let hits = samples.iter().filter(|s| !s.gold.is_disjoint(&s.predicted)).count();
    Ok(hits as f64 / samples.len() as f64)
}

/// Cohen's kappa. Returns 1.0 when chance agreement is already perfect.
pub fn cohen_kappa<L: Ord>(a: &[L], b: &[L]) -> Result<f64, MetricError> {
    check_lengths(a.len(), b.len())?;
    let n = a.len() as f64;
    let mut marginals: BTreeMap<&L, (usize, usize)> = BTreeMap::new();
    for (x, y) in a.iter().zip(b) {
        marginals.entry(x).or_default().0 += 1;
        marginals.entry(y).or_default().1 += 1;
    }
    let observed = a.iter().zip(b).filter(|(x, y)| x == y).count() as f64 / n;
    let expected: f64 = marginals
        .values()
        .map(|&(ca, cb)| (ca as f64 / n) * (cb as f64 / n))
        .sum();
    if (1.0 - expected).abs() < f64::EPSILON {
        return Ok(1.0);
    }
    Ok((observed - expected) / (1.0 - expected))
}

/// Quadratic weighted kappa for ordinals in `1..=k`. When the expected
/// weighted disagreement is zero both raters used one identical category
/// throughout and the result is 1.0.
pub fn quadratic_weighted_kappa(a: &[u32], b: &[u32], k: u32) -> Result<f64, MetricError> {
    check_lengths(a.len(), b.len())?;
    if k < 2 {
        return Err(MetricError::SingleCategory);
    }
    if let Some(&value) = a.iter().chain(b).find(|v| !(1..=k).contains(*v)) {
        return Err(MetricError::OrdinalOutOfRange { value, k });
    }
    let k_us = k as usize;
    let n = a.len() as f64;
    let mut observed = vec![vec![0.0; k_us]; k_us];
    let mut hist_a = vec![0.0; k_us];
    let mut hist_b = vec![0.0; k_us];
    for (&x, &y) in a.iter().zip(b) {
        let (i, j) = ((x - 1) as usize, (y - 1) as usize);
        observed[i][j] += 1.0;
        hist_a[i] += 1.0;
        hist_b[j] += 1.0;
    }
    let scale = ((k - 1) * (k - 1)) as f64;
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..k_us {
        for j in 0..k_us {
            let w = ((i as f64) - (j as f64)).powi(2) / scale;
            num += w * observed[i][j];
            den += w * hist_a[i] * hist_b[j] / n;
        }
    }
    if den == 0.0 {
        return Ok(1.0);
    }
    Ok(1.0 - num / den)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) {
        assert!((a - b).abs() < 1e-12, "{a} != {b}");
    }

    #[test]
    fn f1_hand_examples() {
        let s = f1_scores(&["a", "a", "b", "b"], &["a", "b", "a", "b"]).unwrap();
        close(s.micro_f1, 0.5);
        close(s.macro_f1, 0.5);
        let s = f1_scores(&["a", "a", "a"], &["a", "a", "a"]).unwrap();
        close(s.macro_f1, 1.0);
        assert_eq!(
            f1_scores(&["a"], &["a", "b"]).unwrap_err(),
            MetricError::LengthMismatch { left: 1, right: 2 }
        );
        assert_eq!(f1_scores::<&str>(&[], &[]).unwrap_err(), MetricError::EmptyInput);
    }

    #[test]
    fn hamming_hand_examples() {
        let same = [MultiLabelSample::new(["a", "b"], ["a", "b"])];
        close(hamming_score(&same, 18).unwrap(), 1.0);
        let off = [MultiLabelSample::new(["a", "b"], ["a", "c"])];
        close(hamming_score(&off, 18).unwrap(), 16.0 / 18.0);
        let complement = [MultiLabelSample::new(["a", "b"], ["c", "d"])];
        close(hamming_score(&complement, 4).unwrap(), 0.0);
    }

    #[test]
    fn lenient_credits_group_member() {
        let groups = SimilarityGroups::new(vec![BTreeSet::from([
            "disappointment",
            "disapproval/critique",
        ])])
        .unwrap();
        let s = [MultiLabelSample::new(["disapproval/critique"], ["disappointment"])];
        close(hamming_score(&s, 18).unwrap(), 16.0 / 18.0);
        close(lenient_hamming_score(&s, 18, &groups).unwrap(), 1.0);
        close(lenient_hamming_score(&s, 18, &SimilarityGroups::empty()).unwrap(), 16.0 / 18.0);
    }

    #[test]
    fn overlapping_groups_are_rejected() {
        let err = SimilarityGroups::new(vec![BTreeSet::from(["a", "b"]), BTreeSet::from(["b"])]);
        assert_eq!(err.unwrap_err(), MetricError::OverlappingGroups("b".into()));
    }

    #[test]
    fn kappa_hand_examples() {
        close(cohen_kappa(&["x", "x", "y", "y"], &["y", "y", "x", "x"]).unwrap(), -1.0);
        close(cohen_kappa(&["x", "y"], &["x", "y"]).unwrap(), 1.0);
        close(cohen_kappa(&["x", "x"], &["x", "x"]).unwrap(), 1.0);
        // p_o = 0.5, p_e = 0.5
        close(cohen_kappa(&["x", "y", "x", "y"], &["x", "x", "y", "y"]).unwrap(), 0.0);
    }

    #[test]
    fn qwk_hand_examples() {
        close(quadratic_weighted_kappa(&[1, 5], &[5, 1], 5).unwrap(), -1.0);
        close(quadratic_weighted_kappa(&[2, 3, 4], &[2, 3, 4], 5).unwrap(), 1.0);
        close(quadratic_weighted_kappa(&[3, 3], &[3, 3], 5).unwrap(), 1.0);
        assert_eq!(quadratic_weighted_kappa(&[1], &[1], 1).unwrap_err(), MetricError::SingleCategory);
        assert!(matches!(
            quadratic_weighted_kappa(&[6], &[1], 5),
            Err(MetricError::OrdinalOutOfRange { value: 6, k: 5 })
        ));
    }

    #[test]
    fn near_misses_beat_far_misses() {
        let gold = [1, 2, 3, 4, 5, 1, 2, 3, 4, 5];
        let near = [2, 1, 4, 3, 5, 2, 1, 4, 3, 5];
        let far = [5, 2, 3, 4, 1, 5, 2, 3, 4, 1];
        let q_near = quadratic_weighted_kappa(&gold, &near, 5).unwrap();
        let q_far = quadratic_weighted_kappa(&gold, &far, 5).unwrap();
        assert!(q_near > q_far, "{q_near} <= {q_far}");
    }

    #[test]
    fn one_correct_label() {
        let s = vec![
            MultiLabelSample::new(["interest"], ["interest", "surprise"]),
            MultiLabelSample::new(["interest"], ["annoyance"]),
        ];
        close(one_correct_label_accuracy(&s).unwrap(), 0.5);
    }
}
