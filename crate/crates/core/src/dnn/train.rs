//! Minibatch SGD training: per-layer autoencoder pretraining, softmax-head
//! training, and end-to-end fine-tuning.

use ndarray::{Array2, Axis};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::grad::{ae_backprop, ce_backprop, ce_loss, LayerGrad};
use super::layer::{Activation, LayerParams, NetParams};
use super::{DnnError, TrainConfig};

fn apply_grad(layer: &mut LayerParams, grad: &LayerGrad, lr: f64) {
    layer.weights.zip_mut_with(&grad.weights, |w, g| *w -= lr * g);
    layer.biases.zip_mut_with(&grad.biases, |b, g| *b -= lr * g);
}

fn minibatches(m: usize, batch_size: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    let mut indices: Vec<usize> = (0..m).collect();
    indices.shuffle(rng);
    indices
        .chunks(batch_size.max(1))
        .map(|c| c.to_vec())
        .collect()
}

fn rows(data: &Array2<f64>, idx: &[usize]) -> Array2<f64> {
    data.select(Axis(0), idx)
}

/// Trains one sparse autoencoder on `inputs`; returns (encoder, decoder) and
/// the epoch-mean loss history. Stops when the epoch-mean loss changes by
/// less than `error_threshold`, or at `max_epochs`.
pub fn train_autoencoder(
    inputs: &Array2<f64>,
    hidden_dim: usize,
    tc: &TrainConfig,
    seed: u64,
) -> Result<(LayerParams, LayerParams, Vec<f64>), DnnError> {
    let in_dim = inputs.ncols();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut encoder = LayerParams::random_from(hidden_dim, in_dim, Activation::Sigmoid, &mut rng);
    let mut decoder = LayerParams::random_from(in_dim, hidden_dim, Activation::Sigmoid, &mut rng);

    let mut history = Vec::new();
    let mut prev_epoch_loss = f64::INFINITY;
    for _ in 0..tc.max_epochs {
        let mut epoch_loss = 0.0;
        let batches = minibatches(inputs.nrows(), tc.batch_size, &mut rng);
        let batch_count = batches.len();
        for idx in batches {
            let batch = rows(inputs, &idx);
            let (enc_grad, dec_grad, loss) = ae_backprop(&encoder, &decoder, &batch, tc)?;
            apply_grad(&mut encoder, &enc_grad, tc.learning_rate);
            apply_grad(&mut decoder, &dec_grad, tc.learning_rate);
            epoch_loss += loss;
        }
        epoch_loss /= batch_count.max(1) as f64;
        history.push(epoch_loss);
        if (prev_epoch_loss - epoch_loss).abs() < tc.error_threshold {
            break;
        }
        prev_epoch_loss = epoch_loss;
    }
    Ok((encoder, decoder, history))
}

/// Greedy layer-wise pretraining: the first autoencoder learns the raw
/// inputs, each later one learns the previous encoder's codes. Returns the
/// encoder layers only, in stacking order.
pub fn pretrain_stack(
    inputs: &Array2<f64>,
    hidden_dims: &[usize],
    tc: &TrainConfig,
) -> Result<Vec<LayerParams>, DnnError> {
    assert!(!hidden_dims.is_empty(), "hidden_dims must be non-empty");
    let mut encoders = Vec::with_capacity(hidden_dims.len());
    let mut codes = inputs.clone();
    for (i, &dim) in hidden_dims.iter().enumerate() {
        let seed = tc.rng_seed.wrapping_add(i as u64);
        let (encoder, _, _) = train_autoencoder(&codes, dim, tc, seed)?;
        codes = encoder.forward_batch(&codes)?;
        encoders.push(encoder);
    }
    Ok(encoders)
}

/// Normalizes target bit rows into probability vectors (`bits / popcount`).
/// The complement structure makes the popcount constant across rows; a row
/// with no set bits is rejected.
pub fn normalize_target_bits(bits: &Array2<f64>) -> Result<Array2<f64>, DnnError> {
    let mut out = bits.clone();
    for (row_idx, mut row) in out.rows_mut().into_iter().enumerate() {
        let sum = row.sum();
        if sum == 0.0 {
            return Err(DnnError::AllZeroTargetRow { row: row_idx });
        }
        row.mapv_inplace(|v| v / sum);
    }
    Ok(out)
}

/// Trains a softmax head alone on the last encoder's codes against
/// normalized targets.
pub fn train_softmax(
    codes: &Array2<f64>,
    target_bits: &Array2<f64>,
    tc: &TrainConfig,
) -> Result<LayerParams, DnnError> {
    let targets = normalize_target_bits(target_bits)?;
    let mut rng = ChaCha8Rng::seed_from_u64(tc.rng_seed.wrapping_add(0x50f7));
    let mut head = LayerParams::random_from(
        targets.ncols(),
        codes.ncols(),
        Activation::Softmax,
        &mut rng,
    );

    // Wrap the single layer as a one-layer net so the stack backprop applies.
    let mut net = NetParams {
        input_dim: codes.ncols(),
        output_dim: targets.ncols(),
        layers: vec![head.clone()],
        fingerprint: String::new(),
    };
    let mut prev_epoch_loss = f64::INFINITY;
    for _ in 0..tc.max_epochs {
        let mut epoch_loss = 0.0;
        let batches = minibatches(codes.nrows(), tc.batch_size, &mut rng);
        let batch_count = batches.len();
        for idx in batches {
            let x = rows(codes, &idx);
            let t = rows(&targets, &idx);
            let (grads, loss) = ce_backprop(&net, &x, &t, tc.l2_lambda)?;
            apply_grad(&mut net.layers[0], &grads[0], tc.learning_rate);
            epoch_loss += loss;
        }
        epoch_loss /= batch_count.max(1) as f64;
        if (prev_epoch_loss - epoch_loss).abs() < tc.error_threshold {
            break;
        }
        prev_epoch_loss = epoch_loss;
    }
    head = net.layers.pop().expect("one layer");
    Ok(head)
}

/// Epoch-level diagnostics from `fine_tune`.
#[derive(Debug, Clone)]
pub struct FineTuneReport {
    /// Cross-entropy on the full provided dataset; index 0 is the initial
    /// network, index e the network after epoch e.
    pub train_losses: Vec<f64>,
    /// Cross-entropy on the held-out validation slice, same indexing.
    pub val_losses: Vec<f64>,
    /// Index into the loss vectors of the returned parameters.
    pub best_epoch: usize,
}

/// End-to-end minibatch SGD on softmax cross-entropy.
///
/// A deterministic 10% slice (at least one sample when possible) is held out
/// for validation; the parameters returned are the best-on-validation
/// checkpoint, with the untrained network counting as epoch 0.
pub fn fine_tune(
    net: &NetParams,
    inputs: &Array2<f64>,
    target_bits: &Array2<f64>,
    tc: &TrainConfig,
) -> Result<(NetParams, FineTuneReport), DnnError> {
    net.check_dims()?;
    let targets = normalize_target_bits(target_bits)?;
    let m = inputs.nrows();
    let mut rng = ChaCha8Rng::seed_from_u64(tc.rng_seed.wrapping_add(0xf17e));

    // Deterministic validation holdout.
    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(&mut rng);
    let val_len = (m / 10).clamp(usize::from(m >= 2), m.saturating_sub(1));
    let (val_idx, train_idx) = order.split_at(val_len);
    let train_x = rows(inputs, train_idx);
    let train_t = rows(&targets, train_idx);
    let (val_x, val_t) = if val_idx.is_empty() {
        (train_x.clone(), train_t.clone())
    } else {
        (rows(inputs, val_idx), rows(&targets, val_idx))
    };

    let mut current = net.clone();
    let mut best = net.clone();
    let mut report = FineTuneReport {
        train_losses: vec![ce_loss(&current, inputs, &targets, tc.l2_lambda)?],
        val_losses: vec![ce_loss(&current, &val_x, &val_t, tc.l2_lambda)?],
        best_epoch: 0,
    };
    let mut best_val = report.val_losses[0];
    let mut prev_epoch_loss = f64::INFINITY;

    for epoch in 1..=tc.max_epochs {
        let mut epoch_loss = 0.0;
        let batches = minibatches(train_x.nrows(), tc.batch_size, &mut rng);
        let batch_count = batches.len();
        for idx in batches {
            let x = rows(&train_x, &idx);
            let t = rows(&train_t, &idx);
            let (grads, loss) = ce_backprop(&current, &x, &t, tc.l2_lambda)?;
            for (layer, grad) in current.layers.iter_mut().zip(&grads) {
                apply_grad(layer, grad, tc.learning_rate);
            }
            epoch_loss += loss;
        }
        epoch_loss /= batch_count.max(1) as f64;

        report
            .train_losses
            .push(ce_loss(&current, inputs, &targets, tc.l2_lambda)?);
        let val_loss = ce_loss(&current, &val_x, &val_t, tc.l2_lambda)?;
        report.val_losses.push(val_loss);
        if val_loss < best_val {
            best_val = val_loss;
            best = current.clone();
            report.best_epoch = epoch;
        }

        if (prev_epoch_loss - epoch_loss).abs() < tc.error_threshold {
            break;
        }
        prev_epoch_loss = epoch_loss;
    }
    Ok((best, report))
}
