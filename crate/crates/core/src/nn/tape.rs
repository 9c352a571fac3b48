//! Reverse-mode differentiation over vector-valued nodes.
//!
//! A [`Tape`] records every operation of one forward pass together with its
//! output. [`Tape::backward`] walks the record in reverse, accumulating
//! adjoints for nodes and parameter gradients.

use alloc::vec;
use alloc::vec::Vec;

use super::tensor::{Gradients, ParamId, ParamStore};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Var(usize);

#[derive(Clone, Debug)]
enum Node {
    Const,
    /// Row of a parameter matrix.
    Gather { p: ParamId, row: usize },
    /// Parameter matrix times vector.
    MatVec { p: ParamId, x: Var },
    AddParam { x: Var, p: ParamId },
    Add { a: Var, b: Var },
    Mul { a: Var, b: Var },
    Sigmoid { a: Var },
    Tanh { a: Var },
    Slice { a: Var, start: usize },
    Concat { parts: Vec<Var> },
    /// `argmax[k]` is the input holding the maximum of coordinate `k`.
    MaxPool { inputs: Vec<Var>, argmax: Vec<usize> },
    Attention { q: Var, hs: Vec<Var>, weights: Vec<f64> },
    Focal { p: Var, positive: bool, alpha: f64, gamma: f64, clamped: bool },
    Mean { inputs: Vec<Var> },
}

/// Probabilities are clamped to `[FOCAL_EPS, 1 - FOCAL_EPS]` before the log.
pub const FOCAL_EPS: f64 = 1e-7;

pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + libm::exp(-x))
    } else {
        let e = libm::exp(x);
        e / (1.0 + e)
    }
}

/// Per-sample focal loss `-α_t (1 - p_t)^γ ln p_t` of probability `l`.
pub fn focal_loss(l: f64, positive: bool, alpha: f64, gamma: f64) -> f64 {
    let l = l.clamp(FOCAL_EPS, 1.0 - FOCAL_EPS);
    let (pt, at) = if positive { (l, alpha) } else { (1.0 - l, 1.0 - alpha) };
    -at * libm::pow(1.0 - pt, gamma) * libm::log(pt)
}

/// Derivative of [`focal_loss`] with respect to `p_t` (unclamped region).
fn focal_dpt(pt: f64, at: f64, gamma: f64) -> f64 {
    let lead = if gamma == 0.0 {
        0.0
    } else {
        gamma * libm::pow(1.0 - pt, gamma - 1.0) * libm::log(pt)
    };
    at * (lead - libm::pow(1.0 - pt, gamma) / pt)
}

#[derive(Default)]
pub struct Tape {
    nodes: Vec<Node>,
    values: Vec<Vec<f64>>,
}

impl Tape {
    pub fn new() -> Self {
        Self::default()
    }

    fn push(&mut self, node: Node, value: Vec<f64>) -> Var {
        self.nodes.push(node);
        self.values.push(value);
        Var(self.nodes.len() - 1)
    }

    pub fn value(&self, v: Var) -> &[f64] {
        &self.values[v.0]
    }

    pub fn scalar(&self, v: Var) -> f64 {
        self.values[v.0][0]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn constant(&mut self, value: Vec<f64>) -> Var {
        self.push(Node::Const, value)
    }

    pub fn gather(&mut self, params: &ParamStore, p: ParamId, row: usize) -> Var {
        let v = params.get(p).row(row).to_vec();
        self.push(Node::Gather { p, row }, v)
    }

    pub fn matvec(&mut self, params: &ParamStore, p: ParamId, x: Var) -> Var {
        let w = params.get(p);
        let (r, c) = (w.rows(), w.cols());
        let xv = &self.values[x.0];
        assert_eq!(xv.len(), c, "matvec dimension mismatch");
        let out = (0..r)
            .map(|i| w.data[i * c..(i + 1) * c].iter().zip(xv).map(|(a, b)| a * b).sum())
            .collect();
        self.push(Node::MatVec { p, x }, out)
    }

    pub fn add_param(&mut self, params: &ParamStore, x: Var, p: ParamId) -> Var {
        let b = &params.get(p).data;
        let xv = &self.values[x.0];
        assert_eq!(xv.len(), b.len(), "bias dimension mismatch");
        let out = xv.iter().zip(b).map(|(a, b)| a + b).collect();
        self.push(Node::AddParam { x, p }, out)
    }

    fn zip(&self, a: Var, b: Var, f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
        let (av, bv) = (&self.values[a.0], &self.values[b.0]);
        assert_eq!(av.len(), bv.len(), "elementwise dimension mismatch");
        av.iter().zip(bv).map(|(x, y)| f(*x, *y)).collect()
    }

    pub fn add(&mut self, a: Var, b: Var) -> Var {
        let v = self.zip(a, b, |x, y| x + y);
        self.push(Node::Add { a, b }, v)
    }

    pub fn mul(&mut self, a: Var, b: Var) -> Var {
        let v = self.zip(a, b, |x, y| x * y);
        self.push(Node::Mul { a, b }, v)
    }

    pub fn sigmoid(&mut self, a: Var) -> Var {
        let v = self.values[a.0].iter().map(|x| sigmoid(*x)).collect();
        self.push(Node::Sigmoid { a }, v)
    }

    pub fn tanh(&mut self, a: Var) -> Var {
        let v = self.values[a.0].iter().map(|x| libm::tanh(*x)).collect();
        self.push(Node::Tanh { a }, v)
    }

    pub fn slice(&mut self, a: Var, start: usize, len: usize) -> Var {
        let v = self.values[a.0][start..start + len].to_vec();
        self.push(Node::Slice { a, start }, v)
    }

    pub fn concat(&mut self, parts: &[Var]) -> Var {
        let v = parts.iter().flat_map(|p| self.values[p.0].iter().copied()).collect();
        self.push(Node::Concat { parts: parts.to_vec() }, v)
    }

    /// Elementwise maximum over `inputs`; the first maximum wins ties.
    pub fn max_pool(&mut self, inputs: &[Var]) -> Var {
        assert!(!inputs.is_empty(), "max-pool over no inputs");
        let d = self.values[inputs[0].0].len();
        let mut argmax = vec![0usize; d];
        let mut out = self.values[inputs[0].0].clone();
        for (j, v) in inputs.iter().enumerate().skip(1) {
            let row = &self.values[v.0];
            assert_eq!(row.len(), d, "max-pool dimension mismatch");
            for k in 0..d {
                if row[k] > out[k] {
                    out[k] = row[k];
                    argmax[k] = j;
                }
            }
        }
        self.push(
            Node::MaxPool {
                inputs: inputs.to_vec(),
                argmax,
            },
            out,
        )
    }

    /// Dot-product attention of `q` over `hs`: softmax weights of `q·h_i`
    /// (computed with max subtraction) and the weighted sum of `hs`.
    pub fn attention(&mut self, q: Var, hs: &[Var]) -> Var {
        assert!(!hs.is_empty(), "attention over no states");
        let qv = &self.values[q.0];
        let logits: Vec<f64> = hs
            .iter()
            .map(|h| {
                let hv = &self.values[h.0];
                assert_eq!(hv.len(), qv.len(), "attention dimension mismatch");
                qv.iter().zip(hv).map(|(a, b)| a * b).sum()
            })
            .collect();
        let weights = softmax(&logits);
        // h₀ + Σ wᵢ(hᵢ − h₀) equals Σ wᵢhᵢ and returns h₀ exactly when all states agree.
        let h0 = &self.values[hs[0].0];
        let mut ctx = h0.clone();
        for (w, h) in weights.iter().zip(hs).skip(1) {
            for ((c, x), base) in ctx.iter_mut().zip(&self.values[h.0]).zip(h0) {
                *c += w * (x - base);
            }
        }
        self.push(
            Node::Attention {
                q,
                hs: hs.to_vec(),
                weights,
            },
            ctx,
        )
    }

    /// Weights computed by an [`Tape::attention`] node.
    pub fn attention_weights(&self, v: Var) -> Option<&[f64]> {
        match &self.nodes[v.0] {
            Node::Attention { weights, .. } => Some(weights),
            _ => None,
        }
    }

    /// Focal loss of the scalar probability `p`.
    pub fn focal(&mut self, p: Var, positive: bool, alpha: f64, gamma: f64) -> Var {
        let l = self.values[p.0][0];
        let clamped = !(FOCAL_EPS..=1.0 - FOCAL_EPS).contains(&l);
        let v = focal_loss(l, positive, alpha, gamma);
        self.push(
            Node::Focal {
                p,
                positive,
                alpha,
                gamma,
                clamped,
            },
            vec![v],
        )
    }

    pub fn mean(&mut self, inputs: &[Var]) -> Var {
        let n = inputs.len() as f64;
        let d = self.values[inputs[0].0].len();
        let mut out = vec![0.0; d];
        for v in inputs {
            for (o, x) in out.iter_mut().zip(&self.values[v.0]) {
                *o += x / n;
            }
        }
        self.push(Node::Mean { inputs: inputs.to_vec() }, out)
    }

    /// Accumulates `scale · ∂root/∂θ` into `grads` for every parameter θ.
    /// `root` must be a scalar node.
    pub fn backward(&self, root: Var, params: &ParamStore, grads: &mut Gradients, scale: f64) {
        let mut adj: Vec<Vec<f64>> = self.values.iter().map(|v| vec![0.0; v.len()]).collect();
        adj[root.0][0] = scale;
        for i in (0..=root.0).rev() {
            let g = core::mem::take(&mut adj[i]);
            if g.iter().all(|x| *x == 0.0) {
                continue;
            }
            let y = &self.values[i];
            match &self.nodes[i] {
                Node::Const => {}
                Node::Gather { p, row } => {
                    let t = grads.get_mut(*p);
                    let c = t.cols();
                    for (d, gk) in t.data[row * c..(row + 1) * c].iter_mut().zip(&g) {
                        *d += gk;
                    }
                }
                Node::MatVec { p, x } => {
                    let w = params.get(*p);
                    let c = w.cols();
                    let xv = &self.values[x.0];
                    let gw = grads.get_mut(*p);
                    let ax = &mut adj[x.0];
                    for (r, gr) in g.iter().enumerate() {
                        if *gr == 0.0 {
                            continue;
                        }
                        let wrow = &w.data[r * c..(r + 1) * c];
                        for (a, wk) in ax.iter_mut().zip(wrow) {
                            *a += wk * gr;
                        }
                        for (d, xk) in gw.data[r * c..(r + 1) * c].iter_mut().zip(xv) {
                            *d += gr * xk;
                        }
                    }
                }
                Node::AddParam { x, p } => {
                    for (d, gk) in grads.get_mut(*p).data.iter_mut().zip(&g) {
                        *d += gk;
                    }
                    accumulate(&mut adj[x.0], &g);
                }
                Node::Add { a, b } => {
                    accumulate(&mut adj[a.0], &g);
                    accumulate(&mut adj[b.0], &g);
                }
                Node::Mul { a, b } => {
                    let (av, bv) = (&self.values[a.0], &self.values[b.0]);
                    for k in 0..g.len() {
                        adj[a.0][k] += g[k] * bv[k];
                        adj[b.0][k] += g[k] * av[k];
                    }
                }
                Node::Sigmoid { a } => {
                    for k in 0..g.len() {
                        adj[a.0][k] += g[k] * y[k] * (1.0 - y[k]);
                    }
                }
                Node::Tanh { a } => {
                    for k in 0..g.len() {
                        adj[a.0][k] += g[k] * (1.0 - y[k] * y[k]);
                    }
                }
                Node::Slice { a, start } => {
                    accumulate(&mut adj[a.0][*start..*start + g.len()], &g);
                }
                Node::Concat { parts } => {
                    let mut off = 0;
                    for p in parts {
                        let n = self.values[p.0].len();
                        accumulate(&mut adj[p.0], &g[off..off + n]);
                        off += n;
                    }
                }
                Node::MaxPool { inputs, argmax } => {
                    for (k, j) in argmax.iter().enumerate() {
                        adj[inputs[*j].0][k] += g[k];
                    }
                }
                Node::Attention { q, hs, weights } => {
                    let qv = &self.values[q.0];
                    // dα_i = g·h_i; ds_i = α_i (dα_i - Σ_j α_j dα_j)
                    let da: Vec<f64> = hs
                        .iter()
                        .map(|h| g.iter().zip(&self.values[h.0]).map(|(a, b)| a * b).sum())
                        .collect();
                    let avg: f64 = weights.iter().zip(&da).map(|(w, d)| w * d).sum();
                    for ((h, w), d) in hs.iter().zip(weights).zip(&da) {
                        let ds = w * (d - avg);
                        let hv = &self.values[h.0];
                        for k in 0..g.len() {
                            adj[q.0][k] += ds * hv[k];
                            adj[h.0][k] += w * g[k] + ds * qv[k];
                        }
                    }
                }
                Node::Focal {
                    p,
                    positive,
                    alpha,
                    gamma,
                    clamped,
                } => {
                    if !clamped {
                        let l = self.values[p.0][0];
                        let (pt, at, sign) = if *positive {
                            (l, *alpha, 1.0)
                        } else {
                            (1.0 - l, 1.0 - alpha, -1.0)
                        };
                        adj[p.0][0] += g[0] * sign * focal_dpt(pt, at, *gamma);
                    }
                }
                Node::Mean { inputs } => {
                    let n = inputs.len() as f64;
                    for v in inputs {
                        for (a, gk) in adj[v.0].iter_mut().zip(&g) {
                            *a += gk / n;
                        }
                    }
                }
            }
        }
    }
}

fn accumulate(dst: &mut [f64], src: &[f64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d += s;
    }
}

/// Softmax with max subtraction.
pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let m = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = logits.iter().map(|x| libm::exp(x - m)).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|x| x / s).collect()
}
