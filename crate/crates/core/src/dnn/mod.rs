//! From-scratch feed-forward network: stacked sparse-autoencoder
//! pretraining, a softmax head, end-to-end fine-tuning, and allocation-level
//! evaluation metrics. Plain minibatch SGD throughout; everything is
//! deterministic given the seed in [`TrainConfig`].

mod checkpoint;
mod eval;
mod grad;
mod layer;
mod train;

pub use checkpoint::{load_checkpoint, save_checkpoint};
pub use eval::{evaluate, uniform_output_net, EvalMetrics};
pub use grad::{ae_backprop, ae_loss, ce_backprop, ce_loss, LayerGrad};
pub use layer::{sigmoid, softmax_rows, Activation, LayerParams, NetParams};
pub use train::{
    fine_tune, normalize_target_bits, pretrain_stack, train_autoencoder, train_softmax,
    FineTuneReport,
};

use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum DnnError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("hidden layers must be sigmoid and the head softmax")]
    BadArchitecture,
    #[error("target row {row} has no set bits and cannot be normalized")]
    AllZeroTargetRow { row: usize },
    #[error("scenario fingerprint mismatch: model has {net}, dataset has {data}")]
    SchemaMismatch { net: String, data: String },
    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}:{line}: {reason}")]
    CheckpointFormat {
        path: String,
        line: usize,
        reason: String,
    },
    #[error("train config line {line}: {reason}")]
    TrainConfigFormat { line: usize, reason: String },
}

/// Training hyperparameters shared by pretraining, softmax training, and
/// fine-tuning.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    /// Target mean hidden activation of the sparse autoencoders.
    pub sparsity_rho: f64,
    /// Weight of the KL sparsity penalty.
    pub sparsity_beta: f64,
    /// L2 weight-decay coefficient.
    pub l2_lambda: f64,
    pub max_epochs: usize,
    pub learning_rate: f64,
    pub batch_size: usize,
    /// Early-stop threshold on the change of the epoch-mean loss.
    pub error_threshold: f64,
    pub rng_seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            sparsity_rho: 0.15,
            sparsity_beta: 4.0,
            l2_lambda: 0.004,
            max_epochs: 1000,
            learning_rate: 0.1,
            batch_size: 64,
            error_threshold: 1e-4,
            rng_seed: 42,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), DnnError> {
        let bad = |reason: &str| DnnError::TrainConfigFormat {
            line: 0,
            reason: reason.to_string(),
        };
        if !(self.sparsity_rho > 0.0 && self.sparsity_rho < 1.0) {
            return Err(bad("sparsity_rho must lie in (0, 1)"));
        }
        if self.sparsity_beta < 0.0 || self.l2_lambda < 0.0 {
            return Err(bad("sparsity_beta and l2_lambda must be non-negative"));
        }
        if self.max_epochs == 0 || self.batch_size == 0 {
            return Err(bad("max_epochs and batch_size must be positive"));
        }
        if !(self.learning_rate > 0.0) {
            return Err(bad("learning_rate must be positive"));
        }
        if self.error_threshold < 0.0 {
            return Err(bad("error_threshold must be non-negative"));
        }
        Ok(())
    }

    /// Parses the flat `key = value` train-config format; every key is
    /// optional and unknown keys are rejected.
    pub fn parse(text: &str) -> Result<Self, DnnError> {
        let mut tc = TrainConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (key, value) = trimmed
                .split_once('=')
                .ok_or_else(|| DnnError::TrainConfigFormat {
                    line,
                    reason: format!("expected `key = value`, got `{trimmed}`"),
                })?;
            let key = key.trim();
            let value = value.trim();
            let bad = |e: String| DnnError::TrainConfigFormat {
                line,
                reason: format!("bad value for `{key}`: {e}"),
            };
            match key {
                "sparsity_rho" => tc.sparsity_rho = value.parse().map_err(|e: std::num::ParseFloatError| bad(e.to_string()))?,
                "sparsity_beta" => tc.sparsity_beta = value.parse().map_err(|e: std::num::ParseFloatError| bad(e.to_string()))?,
                "l2_lambda" => tc.l2_lambda = value.parse().map_err(|e: std::num::ParseFloatError| bad(e.to_string()))?,
                "max_epochs" => tc.max_epochs = value.parse().map_err(|e: std::num::ParseIntError| bad(e.to_string()))?,
                "learning_rate" => tc.learning_rate = value.parse().map_err(|e: std::num::ParseFloatError| bad(e.to_string()))?,
                "batch_size" => tc.batch_size = value.parse().map_err(|e: std::num::ParseIntError| bad(e.to_string()))?,
                "error_threshold" => tc.error_threshold = value.parse().map_err(|e: std::num::ParseFloatError| bad(e.to_string()))?,
                "rng_seed" => tc.rng_seed = value.parse().map_err(|e: std::num::ParseIntError| bad(e.to_string()))?,
                other => {
                    return Err(DnnError::TrainConfigFormat {
                        line,
                        reason: format!("unknown key `{other}`"),
                    })
                }
            }
        }
        tc.validate()?;
        Ok(tc)
    }

    pub fn from_file(path: &Path) -> Result<Self, DnnError> {
        let text = std::fs::read_to_string(path).map_err(|source| DnnError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }
}

/// Hidden widths interpolated geometrically from the input width down to a
/// bottleneck (rounded up), the last layer sitting exactly at the
/// bottleneck. The default bottleneck is 0.64 of the input width.
pub fn geometric_widths(input_dim: usize, layers: usize, bottleneck: Option<usize>) -> Vec<usize> {
    assert!(layers >= 1 && input_dim >= 1);
    let b = bottleneck
        .unwrap_or_else(|| ((input_dim as f64 * 0.64).round() as usize).max(4))
        .max(1) as f64;
    let input = input_dim as f64;
    (1..=layers)
        .map(|i| {
            let t = i as f64 / layers as f64;
            (input.powf(1.0 - t) * b.powf(t)).ceil() as usize
        })
        .collect()
}
