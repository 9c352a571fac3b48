//! The attention verifier.
//!
//! Four text channels (function, fields, slice, message) are embedded and
//! run through their own bidirectional LSTMs. Max-pooling yields the
//! function and message queries and the field and slice summaries; the
//! function query attends over the message states and vice versa. The four
//! categorical attributes pass through a shared affine layer. Everything is
//! concatenated and projected to a probability.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::ModelConfig;
use super::tape::{Tape, Var};
use super::tensor::{Gradients, ParamId, ParamStore, Tensor};
use super::NnError;
use crate::encoding::{Channel, EncodedSample, MAX_CONFIDENCE, MAX_RANK};

pub const CHANNELS: [&str; 4] = ["function", "field", "slice", "message"];
pub const ATTRIBUTES: [&str; 4] = ["rule", "category", "rank", "confidence"];

/// Sizes fixed by the vocabularies a model is trained with.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModelDims {
    pub vocab: usize,
    pub rules: usize,
    pub categories: usize,
}

#[derive(Clone, Copy, Debug)]
struct LstmIds {
    w_ih: ParamId,
    w_hh: ParamId,
    bias: ParamId,
}

#[derive(Clone, Copy, Debug)]
struct Ids {
    emb: [ParamId; 4],
    lstm: [[LstmIds; 2]; 4],
    attr_emb: [ParamId; 4],
    attr_w: ParamId,
    attr_b: [ParamId; 4],
    out_w: ParamId,
    out_b: ParamId,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Model {
    pub config: ModelConfig,
    pub dims: ModelDims,
    pub params: ParamStore,
}

/// Intermediate values of one forward pass.
#[derive(Clone, Debug, PartialEq)]
pub struct ForwardTrace {
    /// Hidden states per channel (function, field, slice, message), one row
    /// of width `2·d_h` per unmasked position.
    pub hidden: [Vec<Vec<f64>>; 4],
    pub q_f: Vec<f64>,
    pub q_m: Vec<f64>,
    /// Weights of the function query over message states.
    pub alpha_f: Vec<f64>,
    /// Weights of the message query over function states.
    pub alpha_m: Vec<f64>,
    pub v_f: Vec<f64>,
    pub v_m: Vec<f64>,
    pub v_fc: Vec<f64>,
    pub v_j: Vec<f64>,
    /// Attribute embeddings `x_t`.
    pub x: [Vec<f64>; 4],
    /// Attribute vectors `V_{a_t}`.
    pub v_at: [Vec<f64>; 4],
    pub v_a: Vec<f64>,
    pub v: Vec<f64>,
    pub v_l: f64,
    pub l: f64,
}

/// Tape nodes of one forward pass.
pub struct ForwardVars {
    pub hidden: [Vec<Var>; 4],
    pub q_f: Var,
    pub q_m: Var,
    pub v_f: Var,
    pub v_m: Var,
    pub v_fc: Var,
    pub v_j: Var,
    pub x: [Var; 4],
    pub v_at: [Var; 4],
    pub v_a: Var,
    pub v: Var,
    pub v_l: Var,
    pub l: Var,
}

fn uniform(rng: &mut ChaCha8Rng, shape: &[usize], bound: f64) -> Tensor {
    let n = shape.iter().product();
    Tensor::from_vec(shape, (0..n).map(|_| rng.gen_range(-bound..bound)).collect())
}

impl Model {
    /// Randomly initialized model; the same config, dims and seed give the
    /// same parameters.
    pub fn new(config: ModelConfig, dims: ModelDims) -> Result<Self, NnError> {
        config.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let (de, dh, da) = (config.embed_dim, config.hidden_dim, config.attr_dim);
        let mut ps = ParamStore::default();
        for ch in CHANNELS {
            ps.insert(format!("emb.{ch}"), uniform(&mut rng, &[dims.vocab, de], 0.05));
        }
        let k = 1.0 / libm::sqrt(dh as f64);
        for ch in CHANNELS {
            for dir in ["fwd", "bwd"] {
                ps.insert(format!("lstm.{ch}.{dir}.w_ih"), uniform(&mut rng, &[4 * dh, de], k));
                ps.insert(format!("lstm.{ch}.{dir}.w_hh"), uniform(&mut rng, &[4 * dh, dh], k));
                let mut b = Tensor::zeros(&[4 * dh]);
                b.data[dh..2 * dh].iter_mut().for_each(|x| *x = 1.0);
                ps.insert(format!("lstm.{ch}.{dir}.bias"), b);
            }
        }
        let attr_rows = [
            dims.rules,
            dims.categories,
            usize::from(MAX_RANK) + 1,
            usize::from(MAX_CONFIDENCE) + 1,
        ];
        for (name, rows) in ATTRIBUTES.iter().zip(attr_rows) {
            ps.insert(format!("emb.{name}"), uniform(&mut rng, &[rows, da], 0.05));
        }
        ps.insert("attr.w", uniform(&mut rng, &[da, da], 1.0 / libm::sqrt(da as f64)));
        for name in ATTRIBUTES {
            ps.insert(format!("attr.b.{name}"), Tensor::zeros(&[da]));
        }
        let width = 8 * dh + 4 * da;
        ps.insert("out.w", uniform(&mut rng, &[1, width], 1.0 / libm::sqrt(width as f64)));
        ps.insert("out.b", Tensor::zeros(&[1]));
        let model = Model {
            config,
            dims,
            params: ps,
        };
        model.check_shapes()?;
        Ok(model)
    }

    /// Wraps loaded parameters, checking every expected tensor is present
    /// with the right shape.
    pub fn from_params(config: ModelConfig, dims: ModelDims, params: ParamStore) -> Result<Self, NnError> {
        config.validate()?;
        let model = Model { config, dims, params };
        model.check_shapes()?;
        Ok(model)
    }

    fn expected_shapes(&self) -> Vec<(String, Vec<usize>)> {
        let (de, dh, da) = (self.config.embed_dim, self.config.hidden_dim, self.config.attr_dim);
        let mut v = Vec::new();
        for ch in CHANNELS {
            v.push((format!("emb.{ch}"), vec![self.dims.vocab, de]));
        }
        for ch in CHANNELS {
            for dir in ["fwd", "bwd"] {
                v.push((format!("lstm.{ch}.{dir}.w_ih"), vec![4 * dh, de]));
                v.push((format!("lstm.{ch}.{dir}.w_hh"), vec![4 * dh, dh]));
                v.push((format!("lstm.{ch}.{dir}.bias"), vec![4 * dh]));
            }
        }
        let rows = [
            self.dims.rules,
            self.dims.categories,
            usize::from(MAX_RANK) + 1,
            usize::from(MAX_CONFIDENCE) + 1,
        ];
        for (name, r) in ATTRIBUTES.iter().zip(rows) {
            v.push((format!("emb.{name}"), vec![r, da]));
        }
        v.push(("attr.w".into(), vec![da, da]));
        for name in ATTRIBUTES {
            v.push((format!("attr.b.{name}"), vec![da]));
        }
        v.push(("out.w".into(), vec![1, 8 * dh + 4 * da]));
        v.push(("out.b".into(), vec![1]));
        v
    }

    fn check_shapes(&self) -> Result<(), NnError> {
        let expected = self.expected_shapes();
        if expected.len() != self.params.len() {
            return Err(NnError::Shape(format!(
                "expected {} parameter tensors, found {}",
                expected.len(),
                self.params.len()
            )));
        }
        for (name, shape) in expected {
            match self.params.by_name(&name) {
                Some(t) if t.shape == shape => {}
                Some(t) => {
                    return Err(NnError::Shape(format!("{name}: expected {shape:?}, found {:?}", t.shape)));
                }
                None => return Err(NnError::Shape(format!("missing parameter {name}"))),
            }
        }
        Ok(())
    }

    fn ids(&self) -> Ids {
        let p = |n: &str| self.params.id(n).expect("shape-checked parameter");
        let lstm = |ch: &str, dir: &str| LstmIds {
            w_ih: p(&format!("lstm.{ch}.{dir}.w_ih")),
            w_hh: p(&format!("lstm.{ch}.{dir}.w_hh")),
            bias: p(&format!("lstm.{ch}.{dir}.bias")),
        };
        Ids {
            emb: CHANNELS.map(|c| p(&format!("emb.{c}"))),
            lstm: CHANNELS.map(|c| [lstm(c, "fwd"), lstm(c, "bwd")]),
            attr_emb: ATTRIBUTES.map(|a| p(&format!("emb.{a}"))),
            attr_w: p("attr.w"),
            attr_b: ATTRIBUTES.map(|a| p(&format!("attr.b.{a}"))),
            out_w: p("out.w"),
            out_b: p("out.b"),
        }
    }

    fn lstm_pass(&self, tape: &mut Tape, ids: LstmIds, xs: &[Var]) -> Vec<Var> {
        let dh = self.config.hidden_dim;
        let ps = &self.params;
        let mut state: Option<(Var, Var)> = None;
        let mut out = Vec::with_capacity(xs.len());
        for &x in xs {
            let mut z = tape.matvec(ps, ids.w_ih, x);
            if let Some((h, _)) = state {
                let r = tape.matvec(ps, ids.w_hh, h);
                z = tape.add(z, r);
            }
            let z = tape.add_param(ps, z, ids.bias);
            let zi = tape.slice(z, 0, dh);
            let i = tape.sigmoid(zi);
            let zf = tape.slice(z, dh, dh);
            let f = tape.sigmoid(zf);
            let zg = tape.slice(z, 2 * dh, dh);
            let g = tape.tanh(zg);
            let zo = tape.slice(z, 3 * dh, dh);
            let o = tape.sigmoid(zo);
            let ig = tape.mul(i, g);
            let c = match state {
                Some((_, c_prev)) => {
                    let fc = tape.mul(f, c_prev);
                    tape.add(fc, ig)
                }
                None => ig,
            };
            let tc = tape.tanh(c);
            let h = tape.mul(o, tc);
            state = Some((h, c));
            out.push(h);
        }
        out
    }

    /// Hidden states of the unmasked positions of a channel.
    fn encode_channel(&self, tape: &mut Tape, emb: ParamId, lstm: [LstmIds; 2], ch: &Channel) -> Vec<Var> {
        let xs: Vec<Var> = ch
            .real_ids()
            .map(|id| tape.gather(&self.params, emb, id as usize))
            .collect();
        let fwd = self.lstm_pass(tape, lstm[0], &xs);
        let rev: Vec<Var> = xs.iter().rev().copied().collect();
        let mut bwd = self.lstm_pass(tape, lstm[1], &rev);
        bwd.reverse();
        fwd.iter().zip(&bwd).map(|(f, b)| tape.concat(&[*f, *b])).collect()
    }

    fn check_sample(&self, s: &EncodedSample) -> Result<(), NnError> {
        for (name, ch) in CHANNELS.iter().zip([&s.function, &s.field, &s.slice, &s.message]) {
            if ch.real_len() == 0 {
                return Err(NnError::EmptyChannel(name));
            }
            if let Some(id) = ch.real_ids().find(|id| *id as usize >= self.dims.vocab) {
                return Err(NnError::IdOutOfRange {
                    what: name,
                    id: id as usize,
                    limit: self.dims.vocab,
                });
            }
        }
        let a = s.attrs;
        let limits = [
            (a.rule as usize, self.dims.rules, 0),
            (a.category as usize, self.dims.categories, 0),
            (a.rank as usize, usize::from(MAX_RANK) + 1, 1),
            (a.confidence as usize, usize::from(MAX_CONFIDENCE) + 1, 1),
        ];
        for (name, (id, limit, min)) in ATTRIBUTES.iter().zip(limits) {
            if id >= limit || id < min {
                return Err(NnError::IdOutOfRange { what: name, id, limit });
            }
        }
        Ok(())
    }

    /// Records the forward pass for `s` on `tape`.
    pub fn forward(&self, tape: &mut Tape, s: &EncodedSample) -> Result<ForwardVars, NnError> {
        self.check_sample(s)?;
        let ids = self.ids();
        let chans = [&s.function, &s.field, &s.slice, &s.message];
        let hidden: [Vec<Var>; 4] = core::array::from_fn(|k| self.encode_channel(tape, ids.emb[k], ids.lstm[k], chans[k]));
        let [h_f, h_fc, h_j, h_m] = &hidden;
        let q_f = tape.max_pool(h_f);
        let q_m = tape.max_pool(h_m);
        let v_fc = tape.max_pool(h_fc);
        let v_j = tape.max_pool(h_j);
        let v_f = tape.attention(q_f, h_m);
        let v_m = tape.attention(q_m, h_f);
        let a = s.attrs;
        let attr_ids = [a.rule, a.category, a.rank, a.confidence];
        let x: [Var; 4] = core::array::from_fn(|t| tape.gather(&self.params, ids.attr_emb[t], attr_ids[t] as usize));
        let v_at: [Var; 4] = core::array::from_fn(|t| {
            let w = tape.matvec(&self.params, ids.attr_w, x[t]);
            tape.add_param(&self.params, w, ids.attr_b[t])
        });
        let v_a = tape.concat(&v_at);
        let v = tape.concat(&[v_fc, v_f, v_j, v_m, v_a]);
        let lin = tape.matvec(&self.params, ids.out_w, v);
        let v_l = tape.add_param(&self.params, lin, ids.out_b);
        let l = tape.sigmoid(v_l);
        Ok(ForwardVars {
            hidden,
            q_f,
            q_m,
            v_f,
            v_m,
            v_fc,
            v_j,
            x,
            v_at,
            v_a,
            v,
            v_l,
            l,
        })
    }

    pub fn trace(&self, s: &EncodedSample) -> Result<ForwardTrace, NnError> {
        let mut tape = Tape::new();
        let fv = self.forward(&mut tape, s)?;
        let val = |v: Var| tape.value(v).to_vec();
        Ok(ForwardTrace {
            hidden: core::array::from_fn(|k| fv.hidden[k].iter().map(|v| val(*v)).collect()),
            q_f: val(fv.q_f),
            q_m: val(fv.q_m),
            alpha_f: tape.attention_weights(fv.v_f).unwrap_or_default().to_vec(),
            alpha_m: tape.attention_weights(fv.v_m).unwrap_or_default().to_vec(),
            v_f: val(fv.v_f),
            v_m: val(fv.v_m),
            v_fc: val(fv.v_fc),
            v_j: val(fv.v_j),
            x: fv.x.map(val),
            v_at: fv.v_at.map(val),
            v_a: val(fv.v_a),
            v: val(fv.v),
            v_l: tape.scalar(fv.v_l),
            l: tape.scalar(fv.l),
        })
    }

    /// Probability that `s` is bug-sensitive.
    pub fn probability(&self, s: &EncodedSample) -> Result<f64, NnError> {
        let mut tape = Tape::new();
        let fv = self.forward(&mut tape, s)?;
        Ok(tape.scalar(fv.l))
    }

    /// Mean focal loss over `batch`, accumulating its gradient into `grads`.
    pub fn loss_and_grad(&self, batch: &[&EncodedSample], grads: &mut Gradients) -> Result<f64, NnError> {
        if batch.is_empty() {
            return Err(NnError::EmptyBatch);
        }
        let scale = 1.0 / batch.len() as f64;
        let mut total = 0.0;
        for s in batch {
            let mut tape = Tape::new();
            let fv = self.forward(&mut tape, s)?;
            let loss = tape.focal(fv.l, s.label == 1, self.config.focal_alpha, self.config.focal_gamma);
            total += tape.scalar(loss);
            tape.backward(loss, &self.params, grads, scale);
        }
        Ok(total * scale)
    }

    /// Mean focal loss over `batch` without gradients.
    pub fn loss(&self, batch: &[&EncodedSample]) -> Result<f64, NnError> {
        if batch.is_empty() {
            return Err(NnError::EmptyBatch);
        }
        let mut total = 0.0;
        for s in batch {
            let l = self.probability(s)?;
            total += super::tape::focal_loss(l, s.label == 1, self.config.focal_alpha, self.config.focal_gamma);
        }
        Ok(total / batch.len() as f64)
    }
}
