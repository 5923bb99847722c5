//! Brute-force reference implementations of the evaluation metrics. Each
//! one takes a different route from the library code: enumeration over the
//! whole label scheme, precision/recall instead of pooled counts, and
//! all-pairs means instead of marginal products.
#![allow(dead_code)]

use std::collections::BTreeSet;

pub fn f1_macro(gold: &[u8], pred: &[u8]) -> f64 {
    let classes: BTreeSet<u8> = gold.iter().chain(pred).copied().collect();
    let mut total = 0.0;
    for c in &classes {
        let tp = (0..gold.len()).filter(|&i| gold[i] == *c && pred[i] == *c).count() as f64;
        let predicted = pred.iter().filter(|p| *p == c).count() as f64;
        let actual = gold.iter().filter(|g| *g == c).count() as f64;
        let precision = if predicted > 0.0 { tp / predicted } else { 0.0 };
        let recall = if actual > 0.0 { tp / actual } else { 0.0 };
        total += if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
    }
    total / classes.len() as f64
}

/// With one label per sample every miss is one false positive and one false
/// negative, so micro F1 is plain accuracy.
pub fn f1_micro(gold: &[u8], pred: &[u8]) -> f64 {
    (0..gold.len()).filter(|&i| gold[i] == pred[i]).count() as f64 / gold.len() as f64
}

pub fn hamming(samples: &[(BTreeSet<u8>, BTreeSet<u8>)], scheme_size: u8) -> f64 {
    let mut wrong = 0usize;
    for (gold, pred) in samples {
        for label in 0..scheme_size {
            if gold.contains(&label) != pred.contains(&label) {
                wrong += 1;
            }
        }
    }
    1.0 - wrong as f64 / (samples.len() as f64 * f64::from(scheme_size))
}

/// Within a group any unmatched prediction can stand in for any unmatched
/// gold label, so the best matching per group has size `min(#pred, #gold)`.
pub fn lenient_hamming(
    samples: &[(BTreeSet<u8>, BTreeSet<u8>)],
    scheme_size: u8,
    groups: &[BTreeSet<u8>],
) -> f64 {
    let mut wrong = 0usize;
    for (gold, pred) in samples {
        let mut loss = (0..scheme_size)
            .filter(|l| gold.contains(l) != pred.contains(l))
            .count();
        for group in groups {
            let extra = pred.iter().filter(|l| group.contains(l) && !gold.contains(l)).count();
            let missing = gold.iter().filter(|l| group.contains(l) && !pred.contains(l)).count();
            loss -= 2 * extra.min(missing);
        }
        wrong += loss;
    }
    1.0 - wrong as f64 / (samples.len() as f64 * f64::from(scheme_size))
}

pub fn one_correct(samples: &[(BTreeSet<u8>, BTreeSet<u8>)]) -> f64 {
    let hits = samples
        .iter()
        .filter(|(gold, pred)| pred.iter().any(|p| gold.contains(p)))
        .count();
    hits as f64 / samples.len() as f64
}

/// Chance agreement as the share of agreeing pairs over all `(i, j)`.
pub fn cohen_kappa(a: &[u8], b: &[u8]) -> f64 {
    let n = a.len();
    let observed = (0..n).filter(|&i| a[i] == b[i]).count() as f64 / n as f64;
    let mut agree = 0usize;
    for x in a {
        for y in b {
            if x == y {
                agree += 1;
            }
        }
    }
    let expected = agree as f64 / (n * n) as f64;
    if expected == 1.0 {
        1.0
    } else {
        (observed - expected) / (1.0 - expected)
    }
}

/// One minus observed weighted disagreement over the weighted disagreement
/// of all cross pairs.
pub fn qwk(a: &[u32], b: &[u32], k: u32) -> f64 {
    let w = |x: u32, y: u32| {
        let d = f64::from(x) - f64::from(y);
        d * d / f64::from((k - 1) * (k - 1))
    };
    let n = a.len() as f64;
    let observed: f64 = a.iter().zip(b).map(|(x, y)| w(*x, *y)).sum::<f64>() / n;
    let mut expected = 0.0;
    for x in a {
        for y in b {
            expected += w(*x, *y);
        }
    }
    expected /= n * n;
    if expected == 0.0 {
        1.0
    } else {
        1.0 - observed / expected
    }
}
