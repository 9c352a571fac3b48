use alloc::vec::Vec;

use super::tensor::{Gradients, ParamStore, Tensor};

/// Bias-corrected Adam.
#[derive(Clone, Debug, PartialEq)]
pub struct Adam {
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    t: u64,
    m: Vec<Tensor>,
    v: Vec<Tensor>,
}

impl Adam {
    pub fn new(params: &ParamStore) -> Self {
        let zeros = || params.iter().map(|(_, _, t)| Tensor::zeros(&t.shape)).collect();
        Adam {
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            t: 0,
            m: zeros(),
            v: zeros(),
        }
    }

    pub fn steps(&self) -> u64 {
        self.t
    }

    pub fn step(&mut self, params: &mut ParamStore, grads: &Gradients, lr: f64) {
        self.t += 1;
        let c1 = 1.0 - libm::pow(self.beta1, self.t as f64);
        let c2 = 1.0 - libm::pow(self.beta2, self.t as f64);
        for (i, p) in params.tensors_mut().iter_mut().enumerate() {
            let g = &grads.0[i].data;
            let (m, v) = (&mut self.m[i].data, &mut self.v[i].data);
            for k in 0..p.data.len() {
                if g[k] == 0.0 && m[k] == 0.0 && v[k] == 0.0 {
                    continue;
                }
                m[k] = self.beta1 * m[k] + (1.0 - self.beta1) * g[k];
                v[k] = self.beta2 * v[k] + (1.0 - self.beta2) * g[k] * g[k];
                let mh = m[k] / c1;
                let vh = v[k] / c2;
                p.data[k] -= lr * mh / (libm::sqrt(vh) + self.eps);
            }
        }
    }
}

/// Multiplies the learning rate by `factor` once the monitored score has
/// not improved for `patience` consecutive epochs, then restarts the count.
#[derive(Clone, Debug, PartialEq)]
pub struct PlateauScheduler {
    pub patience: usize,
    pub factor: f64,
    best: Option<f64>,
    stale: usize,
}

impl PlateauScheduler {
    pub fn new(patience: usize, factor: f64) -> Self {
        PlateauScheduler {
            patience,
            factor,
            best: None,
            stale: 0,
        }
    }

    pub fn best(&self) -> Option<f64> {
        self.best
    }

    /// Records an epoch score. Returns whether it improved on the best so
    /// far and the learning rate to use next.
    pub fn observe(&mut self, score: f64, lr: f64) -> (bool, f64) {
        if self.best.is_none_or(|b| score > b) {
            self.best = Some(score);
            self.stale = 0;
            return (true, lr);
        }
        self.stale += 1;
        if self.stale >= self.patience.max(1) {
            self.stale = 0;
            (false, lr * self.factor)
        } else {
            (false, lr)
        }
    }
}
