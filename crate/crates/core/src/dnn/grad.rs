//! Losses and their exact analytic gradients.
//!
//! Two loss kinds are trained in this crate: the sparse-autoencoder
//! reconstruction loss (mean squared error plus a KL sparsity penalty on the
//! mean hidden activation plus L2 weight decay) and softmax cross-entropy
//! against probability-normalized targets (plus the same L2 term). Both
//! gradients are verified against central finite differences in the test
//! suite; that check is the contract for everything in this file.

use ndarray::{Array1, Array2, Axis};

use super::layer::{Activation, LayerParams, NetParams};
use super::{DnnError, TrainConfig};

/// Gradient of one layer's parameters.
#[derive(Debug, Clone)]
pub struct LayerGrad {
    pub weights: Array2<f64>,
    pub biases: Array1<f64>,
}

const RHO_HAT_CLAMP: f64 = 1e-8;
const LOG_FLOOR: f64 = 1e-300;

fn kl_bernoulli(rho: f64, rho_hat: f64) -> f64 {
    rho * (rho / rho_hat).ln() + (1.0 - rho) * ((1.0 - rho) / (1.0 - rho_hat)).ln()
}

fn clamp_rho_hat(v: f64) -> f64 {
    v.clamp(RHO_HAT_CLAMP, 1.0 - RHO_HAT_CLAMP)
}

/// Sparse-autoencoder loss over a batch:
/// mean over samples of half the squared reconstruction error, plus
/// `beta * sum_j KL(rho || rho_hat_j)` over hidden units, plus
/// `lambda/2 * (|W_enc|^2 + |W_dec|^2)`.
pub fn ae_loss(
    encoder: &LayerParams,
    decoder: &LayerParams,
    batch: &Array2<f64>,
    tc: &TrainConfig,
) -> Result<f64, DnnError> {
    let hidden = encoder.forward_batch(batch)?;
    let output = decoder.forward_batch(&hidden)?;
    let m = batch.nrows() as f64;

    let recon = 0.5 * (&output - batch).mapv(|d| d * d).sum() / m;

    let rho_hat = hidden.mean_axis(Axis(0)).expect("non-empty batch");
    let sparsity: f64 = rho_hat
        .iter()
        .map(|&r| kl_bernoulli(tc.sparsity_rho, clamp_rho_hat(r)))
        .sum();

    let l2 = 0.5
        * tc.l2_lambda
        * (encoder.weights.mapv(|w| w * w).sum() + decoder.weights.mapv(|w| w * w).sum());

    Ok(recon + tc.sparsity_beta * sparsity + l2)
}

/// Analytic gradients of `ae_loss` for both layers, plus the loss itself.
pub fn ae_backprop(
    encoder: &LayerParams,
    decoder: &LayerParams,
    batch: &Array2<f64>,
    tc: &TrainConfig,
) -> Result<(LayerGrad, LayerGrad, f64), DnnError> {
    debug_assert_eq!(encoder.activation, Activation::Sigmoid);
    debug_assert_eq!(decoder.activation, Activation::Sigmoid);
    let hidden = encoder.forward_batch(batch)?;
    let output = decoder.forward_batch(&hidden)?;
    let m = batch.nrows() as f64;

    let rho_hat = hidden.mean_axis(Axis(0)).expect("non-empty batch");

    let recon = 0.5 * (&output - batch).mapv(|d| d * d).sum() / m;
    let sparsity: f64 = rho_hat
        .iter()
        .map(|&r| kl_bernoulli(tc.sparsity_rho, clamp_rho_hat(r)))
        .sum();
    let l2 = 0.5
        * tc.l2_lambda
        * (encoder.weights.mapv(|w| w * w).sum() + decoder.weights.mapv(|w| w * w).sum());
    let loss = recon + tc.sparsity_beta * sparsity + l2;

    // Output delta: ((a2 - x)/m) * a2 (1 - a2).
    let delta_out = (&output - batch).mapv(|v| v / m) * output.mapv(|a| a * (1.0 - a));

    // Hidden delta adds the sparsity term; each sample contributes 1/m to
    // rho_hat, so the per-sample derivative is beta/m * dKL/drho_hat.
    let sparse_row: Array1<f64> = rho_hat.mapv(|r| {
        let r = clamp_rho_hat(r);
        tc.sparsity_beta / m * (-tc.sparsity_rho / r + (1.0 - tc.sparsity_rho) / (1.0 - r))
    });
    let delta_hidden =
        (delta_out.dot(&decoder.weights) + &sparse_row) * hidden.mapv(|a| a * (1.0 - a));

    let dec_grad = LayerGrad {
        weights: delta_out.t().dot(&hidden) + &decoder.weights.mapv(|w| tc.l2_lambda * w),
        biases: delta_out.sum_axis(Axis(0)),
    };
    let enc_grad = LayerGrad {
        weights: delta_hidden.t().dot(batch) + &encoder.weights.mapv(|w| tc.l2_lambda * w),
        biases: delta_hidden.sum_axis(Axis(0)),
    };
    Ok((enc_grad, dec_grad, loss))
}

/// Mean softmax cross-entropy of the network against row-normalized targets,
/// plus `lambda/2 * sum |W|^2` over every layer.
pub fn ce_loss(
    net: &NetParams,
    inputs: &Array2<f64>,
    targets: &Array2<f64>,
    l2_lambda: f64,
) -> Result<f64, DnnError> {
    let activations = net.forward_batch(inputs)?;
    let output = activations.last().expect("at least one layer");
    Ok(ce_of_output(output, targets, net, l2_lambda))
}

fn ce_of_output(
    output: &Array2<f64>,
    targets: &Array2<f64>,
    net: &NetParams,
    l2_lambda: f64,
) -> f64 {
    let m = output.nrows() as f64;
    let mut ce = 0.0;
    for (out_row, t_row) in output.rows().into_iter().zip(targets.rows()) {
        for (&y, &t) in out_row.iter().zip(t_row.iter()) {
            if t != 0.0 {
                ce -= t * y.max(LOG_FLOOR).ln();
            }
        }
    }
    let l2: f64 = net
        .layers
        .iter()
        .map(|l| l.weights.mapv(|w| w * w).sum())
        .sum();
    ce / m + 0.5 * l2_lambda * l2
}

/// Analytic gradients of `ce_loss` for the whole stack, plus the loss.
///
/// The softmax head uses the standard identity (output - target)/m at the
/// pre-activation, which is exact because every target row sums to one.
pub fn ce_backprop(
    net: &NetParams,
    inputs: &Array2<f64>,
    targets: &Array2<f64>,
    l2_lambda: f64,
) -> Result<(Vec<LayerGrad>, f64), DnnError> {
    let activations = net.forward_batch(inputs)?;
    let output = activations.last().expect("at least one layer");
    let m = inputs.nrows() as f64;
    let loss = ce_of_output(output, targets, net, l2_lambda);

    let layer_count = net.layers.len();
    let mut grads: Vec<Option<LayerGrad>> = (0..layer_count).map(|_| None).collect();

    // Softmax + cross-entropy delta at the head.
    let mut delta = (output - targets).mapv(|v| v / m);
    for idx in (0..layer_count).rev() {
        let input_act = if idx == 0 { inputs } else { &activations[idx - 1] };
        grads[idx] = Some(LayerGrad {
            weights: delta.t().dot(input_act)
                + &net.layers[idx].weights.mapv(|w| l2_lambda * w),
            biases: delta.sum_axis(Axis(0)),
        });
        if idx > 0 {
            let upstream = delta.dot(&net.layers[idx].weights);
            let act = &activations[idx - 1];
            delta = match net.layers[idx - 1].activation {
                Activation::Sigmoid => upstream * act.mapv(|a| a * (1.0 - a)),
                Activation::Linear => upstream,
                Activation::Softmax => {
                    // Softmax below the head is not part of this
                    // architecture; check_dims rejects it up front.
                    unreachable!("hidden softmax layers are rejected by check_dims")
                }
            };
        }
    }
    Ok((grads.into_iter().map(|g| g.expect("filled")).collect(), loss))
}
