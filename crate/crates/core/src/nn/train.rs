use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::model::Model;
use super::optim::{Adam, PlateauScheduler};
use super::NnError;
use crate::dataset::Label;
use crate::encoding::EncodedSample;
use crate::metrics::{compute_metrics, predict, MetricsReport};

#[derive(Clone, Debug, PartialEq)]
pub struct EpochRecord {
    pub epoch: usize,
    pub train_loss: f64,
    /// Bug-sensitive F1 on the validation split, in percent.
    pub val_f1: f64,
    /// Learning rate used during the epoch.
    pub learning_rate: f64,
    pub improved: bool,
    /// The learning rate was decayed after this epoch.
    pub decayed: bool,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrainHistory {
    pub epochs: Vec<EpochRecord>,
    /// Epoch whose parameters were kept.
    pub best_epoch: usize,
    pub best_val_f1: f64,
}

/// Probabilities for every sample.
pub fn score_all(model: &Model, samples: &[EncodedSample]) -> Result<Vec<f64>, NnError> {
    samples.iter().map(|s| model.probability(s)).collect()
}

pub fn evaluate(model: &Model, samples: &[EncodedSample]) -> Result<MetricsReport, NnError> {
    let scores = score_all(model, samples)?;
    let preds: Vec<Label> = scores.iter().map(|p| predict(*p, model.config.threshold)).collect();
    let labels: Vec<Label> = samples.iter().map(label_of).collect();
    Ok(compute_metrics(&preds, &labels))
}

fn label_of(s: &EncodedSample) -> Label {
    if s.label == 1 {
        Label::Sensitive
    } else {
        Label::Insensitive
    }
}

/// Trains with shuffled mini-batches and Adam. After each epoch the
/// bug-sensitive F1 on `validation` drives a plateau learning-rate decay;
/// the parameters of the best epoch are restored at the end.
pub fn train(model: &mut Model, train: &[EncodedSample], validation: &[EncodedSample]) -> Result<TrainHistory, NnError> {
    train_with(model, train, validation, |_| false)
}

/// [`train`] that also ends once `stop` accepts an epoch record.
pub fn train_with(
    model: &mut Model,
    train: &[EncodedSample],
    validation: &[EncodedSample],
    mut stop: impl FnMut(&EpochRecord) -> bool,
) -> Result<TrainHistory, NnError> {
    if train.is_empty() || validation.is_empty() {
        return Err(NnError::EmptySplit);
    }
    let cfg = model.config.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(1);
    let mut adam = Adam::new(&model.params);
    let mut sched = PlateauScheduler::new(cfg.patience, cfg.decay_factor);
    let mut grads = model.params.zeros_like();
    let mut lr = cfg.learning_rate;
    let mut order: Vec<usize> = (0..train.len()).collect();
    let mut history = TrainHistory::default();
    let mut best = model.params.clone();
    for epoch in 1..=cfg.max_epochs {
        order.shuffle(&mut rng);
        let mut loss_sum = 0.0;
        for chunk in order.chunks(cfg.batch_size) {
            let batch: Vec<&EncodedSample> = chunk.iter().map(|i| &train[*i]).collect();
            grads.zero();
            loss_sum += model.loss_and_grad(&batch, &mut grads)? * batch.len() as f64;
            adam.step(&mut model.params, &grads, lr);
        }
        let report = evaluate(model, validation)?;
        let val_f1 = report.sensitive.map_or(0.0, |c| c.f1);
        let (improved, next_lr) = sched.observe(val_f1, lr);
        if improved {
            best = model.params.clone();
            history.best_epoch = epoch;
            history.best_val_f1 = val_f1;
        }
        history.epochs.push(EpochRecord {
            epoch,
            train_loss: loss_sum / train.len() as f64,
            val_f1,
            learning_rate: lr,
            improved,
            decayed: next_lr != lr,
        });
        lr = next_lr;
        if stop(history.epochs.last().expect("just pushed")) {
            break;
        }
    }
    model.params = best;
    Ok(history)
}
