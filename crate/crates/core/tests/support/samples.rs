//! Small model configuration and random encoded samples.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use warnsift_core::encoding::{AttrIds, Channel, EncodedSample};
use warnsift_core::nn::{Model, ModelConfig, ModelDims};

pub fn small_config(seed: u64) -> ModelConfig {
    let mut c = ModelConfig {
        vocab_size: 50,
        embed_dim: 8,
        hidden_dim: 8,
        attr_dim: 8,
        seed,
        ..ModelConfig::default()
    };
    c.lengths.function = 6;
    c.lengths.field = 6;
    c.lengths.slice = 6;
    c.lengths.message = 6;
    c
}

pub const SMALL_DIMS: ModelDims = ModelDims {
    vocab: 50,
    rules: 6,
    categories: 5,
};

pub fn small_model(seed: u64) -> Model {
    Model::new(small_config(seed), SMALL_DIMS).unwrap()
}

pub fn random_channel(rng: &mut ChaCha8Rng, vocab: usize, cap: usize) -> Channel {
    let n = rng.gen_range(1..=cap);
    let mut ids: Vec<u32> = (0..n).map(|_| rng.gen_range(2..vocab as u32)).collect();
    let mut mask = vec![true; n];
    ids.resize(cap, 0);
    mask.resize(cap, false);
    Channel { ids, mask }
}

pub fn random_sample(rng: &mut ChaCha8Rng, dims: ModelDims, cap: usize) -> EncodedSample {
    EncodedSample {
        function: random_channel(rng, dims.vocab, cap),
        field: random_channel(rng, dims.vocab, cap),
        slice: random_channel(rng, dims.vocab, cap),
        message: random_channel(rng, dims.vocab, cap),
        attrs: AttrIds {
            rule: rng.gen_range(0..dims.rules as u32),
            category: rng.gen_range(0..dims.categories as u32),
            rank: rng.gen_range(1..=20),
            confidence: rng.gen_range(1..=3),
        },
        label: rng.gen_range(0..2),
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
