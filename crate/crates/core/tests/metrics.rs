use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use warnsift_core::metrics::*;
use warnsift_core::Label;

/// Per-class metrics by direct counting, in percent; `None` without support.
fn by_hand(preds: &[Label], labels: &[Label], class: Label) -> Option<(f64, f64, f64)> {
    let hit = preds.iter().zip(labels).filter(|(p, y)| **p == class && **y == class).count() as f64;
    let predicted = preds.iter().filter(|p| **p == class).count() as f64;
    let actual = labels.iter().filter(|y| **y == class).count() as f64;
    if actual == 0.0 {
        return None;
    }
    let p = if predicted == 0.0 { 0.0 } else { 100.0 * hit / predicted };
    let r = 100.0 * hit / actual;
    let f = if p + r == 0.0 { 0.0 } else { 2.0 * p * r / (p + r) };
    Some((p, r, f))
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9
}

fn check(preds: &[Label], labels: &[Label]) {
    let r = compute_metrics(preds, labels);
    for (class, got) in [(Label::Sensitive, r.sensitive), (Label::Insensitive, r.insensitive)] {
        match (by_hand(preds, labels, class), got) {
            (None, None) => {}
            (Some((p, rc, f)), Some(c)) => {
                assert!(close(p, c.precision) && close(rc, c.recall) && close(f, c.f1), "{class}: {c:?}");
            }
            (want, got) => panic!("{class}: expected {want:?}, got {got:?}"),
        }
    }
    // With two classes, inverse-frequency weights reduce to the other
    // class's share of the samples.
    let ns = labels.iter().filter(|y| y.is_sensitive()).count() as f64;
    let ni = labels.len() as f64 - ns;
    let (s, i) = (by_hand(preds, labels, Label::Sensitive), by_hand(preds, labels, Label::Insensitive));
    let (ws, wi) = match (s, i) {
        (Some(_), Some(_)) => (ni / (ns + ni), ns / (ns + ni)),
        (Some(_), None) => (1.0, 0.0),
        (None, Some(_)) => (0.0, 1.0),
        (None, None) => (0.0, 0.0),
    };
    let s = s.unwrap_or_default();
    let i = i.unwrap_or_default();
    assert!(close(r.overall.precision, ws * s.0 + wi * i.0));
    assert!(close(r.overall.recall, ws * s.1 + wi * i.1));
    assert!(close(r.overall.f1, ws * s.2 + wi * i.2));
    assert_eq!(r.counts.total(), labels.len() as u64);
}

use Label::{Insensitive as I, Sensitive as S};

#[test]
fn hand_built_confusion_sets() {
    let cases: Vec<(Vec<Label>, Vec<Label>)> = vec![
        (vec![S], vec![S]),
        (vec![I], vec![S]),
        (vec![S], vec![I]),
        (vec![I], vec![I]),
        (vec![S, S], vec![S, I]),
        (vec![I, I], vec![S, I]),
        (vec![S, I], vec![I, S]),
        (vec![S, I, I, I], vec![S, I, I, I]),
        (vec![S, S, S, S], vec![S, I, I, I]),
        (vec![I, I, I, I], vec![S, I, I, I]),
        (vec![S, I, S, I, I], vec![S, S, I, I, I]),
        (vec![I, S, I, I, I, I], vec![S, S, I, I, I, I]),
        (vec![S, S, I], vec![S, S, S]),
        (vec![I, I, I], vec![I, I, I]),
    ];
    for (p, y) in &cases {
        check(p, y);
    }
    // One hand-worked case: tp 1, fp 1, fn 1, tn 2.
    let r = compute_metrics(&[S, I, S, I, I], &[S, S, I, I, I]);
    let s = r.sensitive.unwrap();
    assert!(close(s.precision, 50.0) && close(s.recall, 50.0) && close(s.f1, 50.0));
    let i = r.insensitive.unwrap();
    assert!(close(i.precision, 200.0 / 3.0) && close(i.recall, 200.0 / 3.0));
    // Weights 3/5 and 2/5.
    assert!(close(r.overall.f1, 0.6 * 50.0 + 0.4 * 200.0 / 3.0));
}

#[test]
fn random_confusion_sets() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..20 {
        let n = rng.gen_range(1..60);
        let y: Vec<Label> = (0..n).map(|_| if rng.gen_bool(0.2) { S } else { I }).collect();
        let p: Vec<Label> = (0..n).map(|_| if rng.gen_bool(0.3) { S } else { I }).collect();
        check(&p, &y);
    }
}

#[test]
fn imbalanced_per_class_values_give_the_weighted_row() {
    let sensitive = ClassMetrics::new(75.52, 60.31, 1000);
    let insensitive = ClassMetrics::new(97.08, 98.51, 12940);
    assert!((sensitive.f1 - 67.06).abs() < 0.01 && (insensitive.f1 - 97.79).abs() < 0.01);
    let r = MetricsReport::from_class_metrics(Some(sensitive), Some(insensitive));
    assert!((r.overall.precision - 77.03).abs() < 0.5, "{:?}", r.overall);
    assert!((r.overall.recall - 62.99).abs() < 0.5, "{:?}", r.overall);
    assert!((r.overall.f1 - 69.21).abs() < 0.5, "{:?}", r.overall);
}

proptest! {
    #[test]
    fn metrics_match_direct_counting(pairs in proptest::collection::vec((any::<bool>(), any::<bool>()), 1..80)) {
        let p: Vec<Label> = pairs.iter().map(|(a, _)| if *a { S } else { I }).collect();
        let y: Vec<Label> = pairs.iter().map(|(_, b)| if *b { S } else { I }).collect();
        check(&p, &y);
    }

    #[test]
    fn prediction_is_strict(prob in 0.0f64..1.0, threshold in 0.0f64..1.0) {
        prop_assert_eq!(predict(prob, threshold).is_sensitive(), prob > threshold);
    }
}
