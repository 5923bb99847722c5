mod oracles;

use std::collections::BTreeSet;
use std::io::Write;

use proptest::prelude::*;
use reflector::metrics::{
    cohen_kappa, evaluate_run, f1_scores, hamming_score, lenient_hamming_score,
    one_correct_label_accuracy, quadratic_weighted_kappa, EvalConfig, EvalError, EvalTask,
    MultiLabelSample, SimilarityGroups,
};

const TOLERANCE: f64 = 1e-9;

fn label_set(max: u8) -> impl Strategy<Value = BTreeSet<u8>> {
    proptest::collection::btree_set(0..max, 1..=max as usize)
}

fn multi_label(max: u8) -> impl Strategy<Value = Vec<(BTreeSet<u8>, BTreeSet<u8>)>> {
    proptest::collection::vec((label_set(max), label_set(max)), 1..=10)
}

/// Disjoint groups from a random assignment of labels to group slots;
/// slot 0 means ungrouped.
fn groups(max: u8) -> impl Strategy<Value = Vec<BTreeSet<u8>>> {
    proptest::collection::vec(0..3u8, max as usize).prop_map(|slots| {
        (1..3u8)
            .map(|g| {
                slots
                    .iter()
                    .enumerate()
                    .filter(|(_, s)| **s == g)
                    .map(|(l, _)| l as u8)
                    .collect::<BTreeSet<u8>>()
            })
            .filter(|g| !g.is_empty())
            .collect()
    })
}

fn samples(raw: &[(BTreeSet<u8>, BTreeSet<u8>)]) -> Vec<MultiLabelSample<u8>> {
    raw.iter()
        .map(|(g, p)| MultiLabelSample::new(g.iter().copied(), p.iter().copied()))
        .collect()
}

fn paired(max: u8) -> impl Strategy<Value = (Vec<u8>, Vec<u8>)> {
    (1..=10usize).prop_flat_map(move |n| {
        (proptest::collection::vec(0..max, n), proptest::collection::vec(0..max, n))
    })
}

fn ordinals() -> impl Strategy<Value = (Vec<u32>, Vec<u32>)> {
    (1..=10usize).prop_flat_map(|n| {
        (proptest::collection::vec(1..=5u32, n), proptest::collection::vec(1..=5u32, n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn f1_matches_oracle((gold, pred) in paired(6)) {
        let s = f1_scores(&gold, &pred).unwrap();
        prop_assert!((s.macro_f1 - oracles::f1_macro(&gold, &pred)).abs() < TOLERANCE);
        prop_assert!((s.micro_f1 - oracles::f1_micro(&gold, &pred)).abs() < TOLERANCE);
    }

    #[test]
    fn multi_label_scores_match_oracles(raw in multi_label(6), groups in groups(6)) {
        let s = samples(&raw);
        let g = SimilarityGroups::new(groups.clone()).unwrap();
        let strict = hamming_score(&s, 6).unwrap();
        let lenient = lenient_hamming_score(&s, 6, &g).unwrap();
        prop_assert!((strict - oracles::hamming(&raw, 6)).abs() < TOLERANCE);
        prop_assert!((lenient - oracles::lenient_hamming(&raw, 6, &groups)).abs() < TOLERANCE);
        prop_assert!(lenient >= strict - TOLERANCE);
        prop_assert!((0.0..=1.0).contains(&strict) && (0.0..=1.0).contains(&lenient));
        let one = one_correct_label_accuracy(&s).unwrap();
        prop_assert!((one - oracles::one_correct(&raw)).abs() < TOLERANCE);
    }

    #[test]
    fn kappas_match_oracles((a, b) in paired(6), (x, y) in ordinals()) {
        let k = cohen_kappa(&a, &b).unwrap();
        prop_assert!((k - oracles::cohen_kappa(&a, &b)).abs() < TOLERANCE);
        prop_assert!((-1.0 - TOLERANCE..=1.0 + TOLERANCE).contains(&k));
        let q = quadratic_weighted_kappa(&x, &y, 5).unwrap();
        prop_assert!((q - oracles::qwk(&x, &y, 5)).abs() < TOLERANCE);
        prop_assert!((-1.0 - TOLERANCE..=1.0 + TOLERANCE).contains(&q));
        prop_assert!((quadratic_weighted_kappa(&x, &x, 5).unwrap() - 1.0).abs() < TOLERANCE);
    }

    #[test]
    fn metrics_ignore_sample_order(raw in multi_label(6), (a, b) in paired(6), rotate in 0usize..10) {
        let mut shuffled = raw.clone();
        let r = rotate % shuffled.len();
        shuffled.rotate_left(r);
        let h1 = hamming_score(&samples(&raw), 6).unwrap();
        let h2 = hamming_score(&samples(&shuffled), 6).unwrap();
        prop_assert!((h1 - h2).abs() < TOLERANCE);
        let (mut a2, mut b2) = (a.clone(), b.clone());
        let r = rotate % a.len();
        a2.rotate_left(r);
        b2.rotate_left(r);
        prop_assert!((cohen_kappa(&a, &b).unwrap() - cohen_kappa(&a2, &b2).unwrap()).abs() < TOLERANCE);
        let f = f1_scores(&a, &b).unwrap();
        let f2 = f1_scores(&a2, &b2).unwrap();
        prop_assert!((f.macro_f1 - f2.macro_f1).abs() < TOLERANCE);
    }

    #[test]
    fn qwk_ignores_reversal_of_the_scale((x, y) in ordinals()) {
        let flip = |v: &[u32]| v.iter().map(|o| 6 - o).collect::<Vec<_>>();
        let q = quadratic_weighted_kappa(&x, &y, 5).unwrap();
        let q2 = quadratic_weighted_kappa(&flip(&x), &flip(&y), 5).unwrap();
        prop_assert!((q - q2).abs() < TOLERANCE);
    }

    #[test]
    fn empty_groups_equal_strict(raw in multi_label(6)) {
        let s = samples(&raw);
        let strict = hamming_score(&s, 6).unwrap();
        let lenient = lenient_hamming_score(&s, 6, &SimilarityGroups::empty()).unwrap();
        prop_assert!((strict - lenient).abs() < TOLERANCE);
    }
}

#[test]
fn complement_prediction_scores_zero() {
    let s = [MultiLabelSample::new([0u8, 1, 2], [3u8, 4, 5])];
    assert_eq!(hamming_score(&s, 6).unwrap(), 0.0);
}

#[test]
fn half_of_262_samples_correct() {
    let s: Vec<MultiLabelSample<u8>> = (0..262)
        .map(|i| MultiLabelSample::new([0u8], [if i < 131 { 0u8 } else { 1 }]))
        .collect();
    assert_eq!(one_correct_label_accuracy(&s).unwrap(), 0.5);
}

fn write(dir: &std::path::Path, name: &str, lines: &[&str]) -> std::path::PathBuf {
    let path = dir.join(name);
    let mut f = std::fs::File::create(&path).unwrap();
    for line in lines {
        writeln!(f, "{line}").unwrap();
    }
    path
}

#[test]
fn gibbs_run_matches_hand_counts() {
    let dir = tempfile::tempdir().unwrap();
    let gold = write(
        dir.path(),
        "gold.jsonl",
        &[
            r#"{"id":"1","label":"description"}"#,
            r#"{"id":"2","label":"feelings"}"#,
            r#"{"id":"3","label":"analysis"}"#,
            r#"{"id":"4","label":"analysis"}"#,
        ],
    );
    let pred = write(
        dir.path(),
        "pred.jsonl",
        &[
            r#"{"id":"4","top3":["analysis","evaluation","feelings"]}"#,
            r#"{"id":"1","top3":["description","feelings","analysis"]}"#,
            r#"{"id":"2","top3":["description","feelings","analysis"]}"#,
            r#"{"id":"3","top3":["conclusion","future_plans","evaluation"]}"#,
        ],
    );
    let report = evaluate_run(&gold, &pred, EvalTask::Gibbs, &EvalConfig::default()).unwrap();
    let m = &report.metrics;
    // top-1: description 2/(2+1+0), feelings 0, analysis 2/(2+0+1), conclusion 0.
    assert!((m["f1_micro_top1"] - 0.5).abs() < 1e-12);
    assert!((m["f1_macro_top1"] - (2.0 / 3.0 + 2.0 / 3.0) / 4.0).abs() < 1e-12);
    // top-3: only sample 3 misses, counted as conclusion.
    assert!((m["f1_micro_top3"] - 0.75).abs() < 1e-12);
    assert!((m["f1_macro_top3"] - (1.0 + 1.0 + 2.0 / 3.0 + 0.0) / 4.0).abs() < 1e-12);
    assert_eq!(report.sample_count, 4);
    assert_eq!(report.label_scheme, "gibbs/6");

    let identity = evaluate_run(&gold, &gold, EvalTask::Gibbs, &EvalConfig::default()).unwrap();
    assert!(identity.metrics.values().all(|v| *v == 1.0));
}

#[test]
fn emotion_run_reports_lenient_credit() {
    let dir = tempfile::tempdir().unwrap();
    let gold = write(dir.path(), "gold.jsonl", &[r#"{"id":"a","labels":["disapproval/critique"]}"#]);
    let pred = write(dir.path(), "pred.jsonl", &[r#"{"id":"a","labels":["disappointment"]}"#]);
    let config = EvalConfig { emotion_scheme_size: 18, ..EvalConfig::default() };
    let report = evaluate_run(&gold, &pred, EvalTask::Emotions, &config).unwrap();
    assert!((report.metrics["hamming"] - 16.0 / 18.0).abs() < 1e-12);
    assert_eq!(report.metrics["lenient_hamming"], 1.0);
    assert_eq!(report.metrics["one_correct_label"], 0.0);
}

#[test]
fn level_run_and_id_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let gold = write(dir.path(), "gold.jsonl", &[r#"{"id":"a","level":1}"#, r#"{"id":"b","level":5}"#]);
    let pred = write(dir.path(), "pred.jsonl", &[r#"{"id":"a","level":5}"#, r#"{"id":"b","level":1}"#]);
    let report = evaluate_run(&gold, &pred, EvalTask::Level, &EvalConfig::default()).unwrap();
    assert!((report.metrics["qwk"] + 1.0).abs() < 1e-12);

    let other = write(dir.path(), "other.jsonl", &[r#"{"id":"a","level":5}"#, r#"{"id":"c","level":1}"#]);
    let err = evaluate_run(&gold, &other, EvalTask::Level, &EvalConfig::default()).unwrap_err();
    assert!(matches!(err, EvalError::IdMismatch(_)));

    let broken = write(dir.path(), "broken.jsonl", &[r#"{"id":"a","level":"high"}"#]);
    let err = evaluate_run(&gold, &broken, EvalTask::Level, &EvalConfig::default()).unwrap_err();
    assert!(matches!(err, EvalError::Schema { line: 1, .. }));
}
