//! Character-level LSTM classifier estimating `q(c | w, g)`.
//!
//! Forms are read one codepoint at a time. The gender embedding is the
//! initial hidden state of the first recurrent layer. Etymology, when used,
//! is an extra symbol appended after the last character. Everything runs in
//! `f64` with a hand-written backward pass, trained with Adam.

mod adam;
mod gradcheck;
mod model;
mod vocab;

pub use adam::{AdamState, ADAM_BETA1, ADAM_BETA2, ADAM_EPSILON};
pub use gradcheck::{compare_gradients, gradient_check, GradientReport};
pub use model::{loss_bits, ClassifierModel, LstmLayer, Parameters};
pub use vocab::{Encoded, Vocabulary};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum NeuralError {
    #[error("invalid model config: {0}")]
    InvalidConfig(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("non-finite training loss after {step} optimizer steps")]
    NonFiniteLoss { step: u64 },
    #[error("label `{0}` is not in the vocabulary")]
    UnknownLabel(String),
    #[error("checkpoint: {0}")]
    Checkpoint(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, NeuralError>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub char_embedding_dim: usize,
    /// Must equal `hidden_dims[0]`.
    pub gender_embedding_dim: usize,
    pub hidden_dims: Vec<usize>,
    pub epochs: usize,
    pub learning_rate: f64,
    pub batch_size: usize,
    pub seed: u64,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            char_embedding_dim: 32,
            gender_embedding_dim: 64,
            hidden_dims: vec![64],
            epochs: 30,
            learning_rate: 3e-3,
            batch_size: 32,
            seed: 0,
        }
    }
}

impl ModelConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(NeuralError::InvalidConfig(msg));
        if self.hidden_dims.is_empty() {
            return bad("at least one hidden layer is required".into());
        }
        if self.char_embedding_dim == 0 || self.hidden_dims.contains(&0) {
            return bad("dimensions must be positive".into());
        }
        if self.gender_embedding_dim != self.hidden_dims[0] {
            return bad(format!(
                "gender embedding ({}) must match the first hidden layer ({})",
                self.gender_embedding_dim, self.hidden_dims[0]
            ));
        }
        if self.epochs == 0 || self.batch_size == 0 {
            return bad("epochs and batch size must be positive".into());
        }
        if !(self.learning_rate >= 0.0) || !self.learning_rate.is_finite() {
            return bad(format!(
                "learning rate {} is not usable",
                self.learning_rate
            ));
        }
        Ok(())
    }

    /// Same config with a different seed.
    pub fn with_seed(&self, seed: u64) -> Self {
        ModelConfig {
            seed,
            ..self.clone()
        }
    }
}

/// Derives an independent seed for sub-job `stream` of a run seeded with `master`.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    // splitmix64 finalizer over the combined words
    let mut z = master
        .wrapping_add(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
