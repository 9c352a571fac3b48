//! Per-class and class-weighted classification metrics, in percent.

use crate::dataset::Label;

/// Bug-sensitive iff the probability strictly exceeds the threshold.
pub fn predict(probability: f64, threshold: f64) -> Label {
    if probability > threshold {
        Label::Sensitive
    } else {
        Label::Insensitive
    }
}

/// Confusion counts with the bug-sensitive class as positive.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ConfusionCounts {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    pub fn_: u64,
}

impl ConfusionCounts {
    pub fn from_pairs(predictions: &[Label], labels: &[Label]) -> Self {
        let mut c = ConfusionCounts::default();
        for (p, y) in predictions.iter().zip(labels) {
            match (p.is_sensitive(), y.is_sensitive()) {
                (true, true) => c.tp += 1,
                (true, false) => c.fp += 1,
                (false, false) => c.tn += 1,
                (false, true) => c.fn_ += 1,
            }
        }
        c
    }

    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }

    /// The same counts with the insensitive class as positive.
    pub fn flipped(&self) -> Self {
        ConfusionCounts {
            tp: self.tn,
            fp: self.fn_,
            tn: self.tp,
            fn_: self.fp,
        }
    }

    /// Metrics of the positive class; `None` when it has no samples.
    pub fn positive_metrics(&self) -> Option<ClassMetrics> {
        let support = self.tp + self.fn_;
        if support == 0 {
            return None;
        }
        let ratio = |num: u64, den: u64| if den == 0 { 0.0 } else { 100.0 * num as f64 / den as f64 };
        Some(ClassMetrics::new(
            ratio(self.tp, self.tp + self.fp),
            ratio(self.tp, support),
            support,
        ))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
}

impl ClassMetrics {
    /// Derives F1 as the harmonic mean of `precision` and `recall`.
    pub fn new(precision: f64, recall: f64, support: u64) -> Self {
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        ClassMetrics {
            precision,
            recall,
            f1,
            support,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Overall {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricsReport {
    pub sensitive: Option<ClassMetrics>,
    pub insensitive: Option<ClassMetrics>,
    /// Average of the per-class values weighted by inverse class frequency,
    /// `w_c = (1/n_c) / Σ_k (1/n_k)`, over the classes present.
    pub overall: Overall,
    pub counts: ConfusionCounts,
}

impl MetricsReport {
    pub fn from_counts(counts: ConfusionCounts) -> Self {
        let mut r = Self::from_class_metrics(counts.positive_metrics(), counts.flipped().positive_metrics());
        r.counts = counts;
        r
    }

    /// Combines per-class metrics; the weights come from each class's
    /// support.
    pub fn from_class_metrics(sensitive: Option<ClassMetrics>, insensitive: Option<ClassMetrics>) -> Self {
        let present = [sensitive, insensitive];
        let norm: f64 = present.iter().flatten().map(|c| 1.0 / c.support as f64).sum();
        let mut overall = Overall {
            precision: 0.0,
            recall: 0.0,
            f1: 0.0,
        };
        for c in present.iter().flatten() {
            let w = (1.0 / c.support as f64) / norm;
            overall.precision += w * c.precision;
            overall.recall += w * c.recall;
            overall.f1 += w * c.f1;
        }
        MetricsReport {
            sensitive,
            insensitive,
            overall,
            counts: ConfusionCounts::default(),
        }
    }
}

/// Metrics of `predictions` against `labels`. Panics if the slices differ
/// in length.
pub fn compute_metrics(predictions: &[Label], labels: &[Label]) -> MetricsReport {
    assert_eq!(predictions.len(), labels.len(), "predictions and labels differ in length");
    MetricsReport::from_counts(ConfusionCounts::from_pairs(predictions, labels))
}
