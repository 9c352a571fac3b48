#[path = "support/gradcheck.rs"]
mod gradcheck;
#[path = "support/samples.rs"]
mod samples;

use proptest::prelude::*;
use samples::*;
use warnsift_core::encoding::{AttrIds, Channel, EncodedSample};
use warnsift_core::nn::*;

fn channel(ids: &[u32], cap: usize) -> Channel {
    let mut c = Channel {
        ids: ids.to_vec(),
        mask: vec![true; ids.len()],
    };
    c.ids.resize(cap, 0);
    c.mask.resize(cap, false);
    c
}

fn fixed_sample() -> EncodedSample {
    EncodedSample {
        function: channel(&[3, 4, 5], 6),
        field: channel(&[7], 6),
        slice: channel(&[8, 9, 10, 11], 6),
        message: channel(&[12, 13], 6),
        attrs: AttrIds {
            rule: 2,
            category: 3,
            rank: 5,
            confidence: 2,
        },
        label: 1,
    }
}

fn zero_all(model: &mut Model) {
    for t in model.params.tensors_mut() {
        t.data.iter_mut().for_each(|x| *x = 0.0);
    }
}

#[test]
fn analytic_gradient_matches_finite_differences() {
    let mut model = small_model(3);
    let mut r = rng(11);
    gradcheck::spread_parameters(&mut model, 0.5, &mut r);
    let batch: Vec<_> = (0..3).map(|_| random_sample(&mut r, SMALL_DIMS, 6)).collect();
    let refs: Vec<_> = batch.iter().collect();
    let coords = gradcheck::check(&mut model, &refs, 20, &mut r);
    let worst = coords
        .iter()
        .max_by(|a, b| a.relative_error().total_cmp(&b.relative_error()))
        .unwrap();
    assert!(
        worst.relative_error() < 1e-4,
        "{}[{}]: analytic {} numeric {}",
        worst.tensor,
        worst.index,
        worst.analytic,
        worst.numeric
    );
    assert!(coords.iter().filter(|c| c.analytic != 0.0).count() > coords.len() / 2);
}

#[test]
fn zero_lstm_gives_zero_states() {
    let mut model = small_model(1);
    zero_all(&mut model);
    let t = model.trace(&fixed_sample()).unwrap();
    for h in t.hidden.iter().flatten() {
        assert_eq!(h.len(), 16);
        assert!(h.iter().all(|x| *x == 0.0));
    }
    // W_v = 0 and b = 0 project to exactly one half.
    assert_eq!(t.l, 0.5);
}

#[test]
fn single_step_lstm_matches_hand_evaluation() {
    let model = small_model(2);
    let s = EncodedSample {
        field: channel(&[7], 6),
        ..fixed_sample()
    };
    let t = model.trace(&s).unwrap();
    let d = model.config.hidden_dim;
    let x = model.params.by_name("emb.field").unwrap().row(7).to_vec();
    for (dir, half) in [("fwd", 0), ("bwd", d)] {
        let w = model.params.by_name(&format!("lstm.field.{dir}.w_ih")).unwrap().clone();
        let b = model.params.by_name(&format!("lstm.field.{dir}.bias")).unwrap().clone();
        let z: Vec<f64> = (0..4 * d)
            .map(|r| w.row(r).iter().zip(&x).map(|(a, b)| a * b).sum::<f64>() + b.data[r])
            .collect();
        for k in 0..d {
            let i = sigmoid(z[k]);
            let g = z[2 * d + k].tanh();
            let o = sigmoid(z[3 * d + k]);
            let h = o * (i * g).tanh();
            assert!((t.hidden[1][0][half + k] - h).abs() < 1e-14);
        }
    }
}

#[test]
fn max_pool_respects_masking() {
    let mut tape = Tape::new();
    let a = tape.constant(vec![1.0, -2.0]);
    let b = tape.constant(vec![3.0, 0.0]);
    let p = tape.max_pool(&[a, b]);
    assert_eq!(tape.value(p), [3.0, 0.0]);
    let p = tape.max_pool(&[a]);
    assert_eq!(tape.value(p), [1.0, -2.0]);
}

#[test]
fn attention_known_cases() {
    let mut tape = Tape::new();
    let q = tape.constant(vec![1.0, 0.0]);
    let h0 = tape.constant(vec![0.0, 5.0]);
    let h1 = tape.constant(vec![3f64.ln(), 7.0]);
    let c = tape.attention(q, &[h0, h1]);
    let w = tape.attention_weights(c).unwrap();
    assert!((w[0] - 0.25).abs() < 1e-15 && (w[1] - 0.75).abs() < 1e-15);
    let c = tape.attention(q, &[h1]);
    assert_eq!(tape.attention_weights(c).unwrap(), [1.0]);
    assert_eq!(tape.value(c), tape.value(h1));
}

#[test]
fn attribute_layer_collapses_to_bias() {
    let mut model = small_model(5);
    model.params.get_mut(model.params.id("attr.w").unwrap()).data.fill(0.0);
    for (k, name) in ["rule", "category", "rank", "confidence"].iter().enumerate() {
        let id = model.params.id(&format!("attr.b.{name}")).unwrap();
        model.params.get_mut(id).data.fill(k as f64 + 0.5);
    }
    let t = model.trace(&fixed_sample()).unwrap();
    for (k, v) in t.v_at.iter().enumerate() {
        assert!(v.iter().all(|x| *x == k as f64 + 0.5));
    }
}

#[test]
fn attribute_layer_by_hand() {
    let mut cfg = small_config(0);
    cfg.attr_dim = 2;
    let mut model = Model::new(cfg, SMALL_DIMS).unwrap();
    let set = |m: &mut Model, name: &str, vals: &[f64]| {
        let id = m.params.id(name).unwrap();
        m.params.get_mut(id).data[..vals.len()].copy_from_slice(vals);
    };
    // Row 2 of the rule table is x = (1, 2); W_a = [[1, -1], [0.5, 2]], b = (0.25, 0).
    set(&mut model, "emb.rule", &[0.0, 0.0, 0.0, 0.0, 1.0, 2.0]);
    set(&mut model, "attr.w", &[1.0, -1.0, 0.5, 2.0]);
    set(&mut model, "attr.b.rule", &[0.25, 0.0]);
    let t = model.trace(&fixed_sample()).unwrap();
    assert_eq!(t.x[0], [1.0, 2.0]);
    assert_eq!(t.v_at[0], [-0.75, 4.5]);
    assert_eq!(t.v_a.len(), 8);
}

#[test]
fn projection_saturates_with_bias() {
    let mut model = small_model(6);
    model.params.get_mut(model.params.id("out.w").unwrap()).data.fill(0.0);
    model.params.get_mut(model.params.id("out.b").unwrap()).data[0] = 20.0;
    assert!(model.probability(&fixed_sample()).unwrap() > 0.999999);
}

#[test]
fn out_of_range_ids_are_rejected() {
    let model = small_model(0);
    let mut s = fixed_sample();
    s.message.ids[0] = 50;
    assert!(matches!(model.probability(&s), Err(NnError::IdOutOfRange { .. })));
    let mut s = fixed_sample();
    s.attrs.rank = 21;
    assert!(model.probability(&s).is_err());
    let mut s = fixed_sample();
    s.field = channel(&[], 6);
    assert_eq!(model.probability(&s), Err(NnError::EmptyChannel("field")));
}

#[test]
fn focal_loss_reductions() {
    assert!((focal_loss(0.5, true, 0.999_999_9, 0.0) / 0.999_999_9 - std::f64::consts::LN_2).abs() < 1e-12);
    assert!((focal_loss(0.9, true, 0.25, 2.0) - 2.6341e-4).abs() < 1e-8);
    assert!(focal_loss(1.0 - 1e-9, true, 0.25, 2.0) < 1e-20);
}

#[test]
fn training_is_deterministic_and_keeps_best() {
    let mut r = rng(8);
    let data: Vec<_> = (0..12).map(|_| random_sample(&mut r, SMALL_DIMS, 6)).collect();
    let run = || {
        let mut cfg = small_config(9);
        cfg.max_epochs = 4;
        cfg.batch_size = 5;
        cfg.learning_rate = 1e-2;
        let mut m = Model::new(cfg, SMALL_DIMS).unwrap();
        let h = train(&mut m, &data, &data).unwrap();
        (m, h)
    };
    let (m1, h1) = run();
    let (m2, h2) = run();
    assert_eq!(h1, h2);
    assert_eq!(m1.params, m2.params);
    assert_eq!(h1.epochs.len(), 4);
    let best = h1.epochs.iter().map(|e| e.val_f1).fold(f64::MIN, f64::max);
    assert_eq!(h1.best_val_f1, best);
    assert!(train(&mut m1.clone(), &[], &data).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn attention_weights_form_a_distribution(
        q in proptest::collection::vec(-5.0f64..5.0, 4),
        hs in proptest::collection::vec(proptest::collection::vec(-5.0f64..5.0, 4), 1..8),
    ) {
        let mut tape = Tape::new();
        let qv = tape.constant(q);
        let hv: Vec<_> = hs.iter().map(|h| tape.constant(h.clone())).collect();
        let c = tape.attention(qv, &hv);
        let w = tape.attention_weights(c).unwrap();
        prop_assert!(w.iter().all(|x| *x >= 0.0));
        prop_assert!((w.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
        let same: Vec<_> = hs.iter().map(|_| hv[0]).collect();
        let c = tape.attention(qv, &same);
        let shared = tape.value(hv[0]).to_vec();
        prop_assert_eq!(tape.value(c), &shared[..]);
    }

    #[test]
    fn focal_with_zero_gamma_is_weighted_cross_entropy(l in 1e-6f64..(1.0 - 1e-6), y in any::<bool>()) {
        let ce = -if y { l.ln() } else { (1.0 - l).ln() };
        prop_assert!((focal_loss(l, y, 0.5, 0.0) - 0.5 * ce).abs() <= 1e-12);
    }

    #[test]
    fn focal_decreases_in_pt(a in 0.01f64..0.98, gap in 0.001f64..0.5, gamma in 0.0f64..4.0) {
        let b = (a + gap).min(0.999);
        prop_assume!(b > a);
        prop_assert!(focal_loss(b, true, 0.25, gamma) < focal_loss(a, true, 0.25, gamma));
    }

    #[test]
    fn padding_does_not_change_the_output(seed in any::<u64>(), extra in 1usize..4) {
        let model = small_model(seed % 7);
        let mut r = rng(seed);
        let s = random_sample(&mut r, SMALL_DIMS, 6);
        let pad = |c: &Channel| {
            let mut c = c.clone();
            c.ids.extend(std::iter::repeat(0).take(extra));
            c.mask.extend(std::iter::repeat(false).take(extra));
            c
        };
        let padded = EncodedSample {
            function: pad(&s.function),
            field: pad(&s.field),
            slice: pad(&s.slice),
            message: pad(&s.message),
            ..s.clone()
        };
        let a = model.probability(&s).unwrap();
        let b = model.probability(&padded).unwrap();
        prop_assert!((a - b).abs() <= 1e-9);
    }

    #[test]
    fn batch_scores_are_per_sample(seed in any::<u64>()) {
        let model = small_model(1);
        let mut r = rng(seed);
        let a = random_sample(&mut r, SMALL_DIMS, 6);
        let b = random_sample(&mut r, SMALL_DIMS, 6);
        let fwd = score_all(&model, &[a.clone(), b.clone()]).unwrap();
        let rev = score_all(&model, &[b, a]).unwrap();
        prop_assert_eq!(fwd[0], rev[1]);
        prop_assert_eq!(fwd[1], rev[0]);
    }
}
