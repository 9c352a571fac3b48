//! The neural verifier and the differentiation core it trains on.

pub mod config;
pub mod model;
pub mod optim;
pub mod tape;
pub mod tensor;
pub mod train;

use alloc::string::String;

pub use config::{ConfigError, ModelConfig};
pub use model::{ForwardTrace, Model, ModelDims};
pub use optim::{Adam, PlateauScheduler};
pub use tape::{focal_loss, sigmoid, softmax, Tape, Var, FOCAL_EPS};
pub use tensor::{Gradients, ParamId, ParamStore, Tensor};
pub use train::{evaluate, score_all, train, train_with, EpochRecord, TrainHistory};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum NnError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{what} id {id} outside 0..{limit}")]
    IdOutOfRange { what: &'static str, id: usize, limit: usize },
    #[error("{0} channel has no unmasked positions")]
    EmptyChannel(&'static str),
    #[error("parameter shape mismatch: {0}")]
    Shape(String),
    #[error("empty batch")]
    EmptyBatch,
    #[error("training and validation splits must be nonempty")]
    EmptySplit,
}
