//! Central finite-difference check of the model's analytic gradient.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use warnsift_core::encoding::EncodedSample;
use warnsift_core::nn::{Model, ParamId};

pub const STEP: f64 = 1e-5;

pub struct Coordinate {
    pub tensor: String,
    pub index: usize,
    pub analytic: f64,
    pub numeric: f64,
}

impl Coordinate {
    /// `|a - n| / max(|a|, |n|)`, zero when both vanish.
    pub fn relative_error(&self) -> f64 {
        let scale = self.analytic.abs().max(self.numeric.abs());
        if scale == 0.0 {
            0.0
        } else {
            (self.analytic - self.numeric).abs() / scale
        }
    }
}

/// Rows of an embedding table that `batch` actually reads.
fn used_rows(name: &str, batch: &[&EncodedSample]) -> Option<Vec<usize>> {
    let mut rows: Vec<usize> = batch
        .iter()
        .flat_map(|s| -> Vec<usize> {
            let ch = match name {
                "emb.function" => &s.function,
                "emb.field" => &s.field,
                "emb.slice" => &s.slice,
                "emb.message" => &s.message,
                "emb.rule" => return vec![s.attrs.rule as usize],
                "emb.category" => return vec![s.attrs.category as usize],
                "emb.rank" => return vec![s.attrs.rank as usize],
                "emb.confidence" => return vec![s.attrs.confidence as usize],
                _ => return Vec::new(),
            };
            ch.real_ids().map(|i| i as usize).collect()
        })
        .collect();
    rows.sort_unstable();
    rows.dedup();
    (!rows.is_empty()).then_some(rows)
}

/// Compares analytic and central-difference gradients of the mean batch
/// loss on `per_tensor` coordinates of every parameter tensor (all of them
/// for smaller tensors). Embedding coordinates are drawn from rows the
/// batch reads.
pub fn check(model: &mut Model, batch: &[&EncodedSample], per_tensor: usize, rng: &mut ChaCha8Rng) -> Vec<Coordinate> {
    let mut grads = model.params.zeros_like();
    model.loss_and_grad(batch, &mut grads).unwrap();
    let names: Vec<(ParamId, String)> = model.params.iter().map(|(id, n, _)| (id, n.to_string())).collect();
    let mut out = Vec::new();
    for (id, name) in names {
        let t = model.params.get(id);
        let cols = t.cols();
        let indices: Vec<usize> = if t.len() <= per_tensor {
            (0..t.len()).collect()
        } else if let Some(rows) = used_rows(&name, batch) {
            (0..per_tensor)
                .map(|_| rows[rng.gen_range(0..rows.len())] * cols + rng.gen_range(0..cols))
                .collect()
        } else {
            (0..per_tensor).map(|_| rng.gen_range(0..t.len())).collect()
        };
        for index in indices {
            let orig = model.params.get(id).data[index];
            model.params.get_mut(id).data[index] = orig + STEP;
            let plus = model.loss(batch).unwrap();
            model.params.get_mut(id).data[index] = orig - STEP;
            let minus = model.loss(batch).unwrap();
            model.params.get_mut(id).data[index] = orig;
            out.push(Coordinate {
                tensor: name.clone(),
                index,
                analytic: grads.get(id).data[index],
                numeric: (plus - minus) / (2.0 * STEP),
            });
        }
    }
    out
}

/// Redraws every parameter uniformly from `(-bound, bound)`. At the
/// default initialization most recurrent gradients sit near the rounding
/// floor of the loss difference, which would make the comparison measure
/// floating-point noise.
pub fn spread_parameters(model: &mut Model, bound: f64, rng: &mut ChaCha8Rng) {
    for t in model.params.tensors_mut() {
        for x in &mut t.data {
            *x = rng.gen_range(-bound..bound);
        }
    }
}
