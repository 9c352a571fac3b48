use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::encoding::{ChannelLengths, Truncation, DEFAULT_VOCAB_CAP};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("unknown configuration key `{0}`")]
    UnknownKey(String),
    #[error("invalid value `{value}` for `{key}`")]
    BadValue { key: String, value: String },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

/// Model and training hyperparameters.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelConfig {
    /// Cap on the token vocabulary, `<pad>` and `<unk>` included.
    pub vocab_size: usize,
    pub embed_dim: usize,
    /// LSTM state size per direction.
    pub hidden_dim: usize,
    pub attr_dim: usize,
    pub lengths: ChannelLengths,
    pub truncation: Truncation,
    pub focal_alpha: f64,
    pub focal_gamma: f64,
    pub learning_rate: f64,
    pub batch_size: usize,
    pub threshold: f64,
    /// Epochs without validation improvement before the learning rate decays.
    pub patience: usize,
    pub decay_factor: f64,
    pub max_epochs: usize,
    pub seed: u64,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            vocab_size: DEFAULT_VOCAB_CAP,
            embed_dim: 512,
            hidden_dim: 512,
            attr_dim: 32,
            lengths: ChannelLengths::default(),
            truncation: Truncation::Head,
            focal_alpha: 0.05,
            focal_gamma: 2.0,
            learning_rate: 5e-5,
            batch_size: 64,
            threshold: 0.5,
            patience: 2,
            decay_factor: 0.5,
            max_epochs: 20,
            seed: 0,
        }
    }
}

fn parse<T: core::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
    value.parse().map_err(|_| ConfigError::BadValue {
        key: key.to_string(),
        value: value.to_string(),
    })
}

impl ModelConfig {
    pub const KEYS: [&'static str; 18] = [
        "vocab_size",
        "embed_dim",
        "hidden_dim",
        "attr_dim",
        "len_function",
        "len_field",
        "len_slice",
        "len_message",
        "truncation",
        "focal_alpha",
        "focal_gamma",
        "learning_rate",
        "batch_size",
        "threshold",
        "patience",
        "decay_factor",
        "max_epochs",
        "seed",
    ];

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let v = value.trim();
        match key.trim() {
            "vocab_size" => self.vocab_size = parse(key, v)?,
            "embed_dim" => self.embed_dim = parse(key, v)?,
            "hidden_dim" => self.hidden_dim = parse(key, v)?,
            "attr_dim" => self.attr_dim = parse(key, v)?,
            "len_function" => self.lengths.function = parse(key, v)?,
            "len_field" => self.lengths.field = parse(key, v)?,
            "len_slice" => self.lengths.slice = parse(key, v)?,
            "len_message" => self.lengths.message = parse(key, v)?,
            "truncation" => {
                self.truncation = Truncation::parse(v).ok_or_else(|| ConfigError::BadValue {
                    key: key.to_string(),
                    value: v.to_string(),
                })?
            }
            "focal_alpha" => self.focal_alpha = parse(key, v)?,
            "focal_gamma" => self.focal_gamma = parse(key, v)?,
            "learning_rate" => self.learning_rate = parse(key, v)?,
            "batch_size" => self.batch_size = parse(key, v)?,
            "threshold" => self.threshold = parse(key, v)?,
            "patience" => self.patience = parse(key, v)?,
            "decay_factor" => self.decay_factor = parse(key, v)?,
            "max_epochs" => self.max_epochs = parse(key, v)?,
            "seed" => self.seed = parse(key, v)?,
            other => return Err(ConfigError::UnknownKey(other.to_string())),
        }
        Ok(())
    }

    /// Parses `key = value` lines; blank lines and `#` comments are skipped.
    pub fn parse_text(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = ModelConfig::default();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| ConfigError::Invalid(format!("expected key=value, got `{line}`")))?;
            cfg.set(k, v)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn pairs(&self) -> Vec<(&'static str, String)> {
        let l = &self.lengths;
        let vals = [
            self.vocab_size.to_string(),
            self.embed_dim.to_string(),
            self.hidden_dim.to_string(),
            self.attr_dim.to_string(),
            l.function.to_string(),
            l.field.to_string(),
            l.slice.to_string(),
            l.message.to_string(),
            self.truncation.as_str().to_string(),
            format!("{:?}", self.focal_alpha),
            format!("{:?}", self.focal_gamma),
            format!("{:?}", self.learning_rate),
            self.batch_size.to_string(),
            format!("{:?}", self.threshold),
            self.patience.to_string(),
            format!("{:?}", self.decay_factor),
            self.max_epochs.to_string(),
            self.seed.to_string(),
        ];
        Self::KEYS.into_iter().zip(vals).collect()
    }

    /// `key=value` lines in a fixed key order; parses back to `self`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (k, v) in self.pairs() {
            s.push_str(k);
            s.push('=');
            s.push_str(&v);
            s.push('\n');
        }
        s
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: &str| Err(ConfigError::Invalid(m.to_string()));
        let l = &self.lengths;
        if [
            self.embed_dim,
            self.hidden_dim,
            self.attr_dim,
            l.function,
            l.field,
            l.slice,
            l.message,
            self.batch_size,
        ]
        .contains(&0)
        {
            return bad("dimensions, channel lengths and batch size must be positive");
        }
        if self.vocab_size < 2 {
            return bad("vocab_size must leave room for <pad> and <unk>");
        }
        if !(self.focal_alpha > 0.0 && self.focal_alpha < 1.0) {
            return bad("focal_alpha must lie in (0, 1)");
        }
        if !(self.focal_gamma >= 0.0) {
            return bad("focal_gamma must be nonnegative");
        }
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return bad("threshold must lie in (0, 1)");
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return bad("learning_rate must be positive");
        }
        if !(self.decay_factor > 0.0 && self.decay_factor <= 1.0) {
            return bad("decay_factor must lie in (0, 1]");
        }
        Ok(())
    }
}
