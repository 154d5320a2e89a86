//! Allocation-level evaluation of a trained network on a dataset.

use ndarray::Array2;

use crate::dataset::{decode_output, Dataset, EncodingDims};
use crate::par;

use super::layer::{Activation, LayerParams, NetParams};
use super::DnnError;

/// Accuracy triple reported for every evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalMetrics {
    /// Fraction of decoded (power, assignment) fields equal to the target,
    /// over all (cell, subband) fields and samples. The headline metric.
    pub field_accuracy: f64,
    /// Fraction of samples with every field correct.
    pub exact_match_rate: f64,
    /// Fraction of decided value bits equal to the target's, under
    /// complement-comparison decoding.
    pub bit_accuracy: f64,
    pub samples: usize,
}

/// A network that outputs the uniform distribution for every input: the
/// chance-level baseline for accuracy comparisons. Ties decode to zero, so
/// its field accuracy is the frequency of zero-valued target fields.
pub fn uniform_output_net(input_dim: usize, output_dim: usize, fingerprint: String) -> NetParams {
    NetParams {
        layers: vec![LayerParams {
            weights: Array2::zeros((output_dim, input_dim)),
            biases: ndarray::Array1::zeros(output_dim),
            activation: Activation::Softmax,
        }],
        input_dim,
        output_dim,
        fingerprint,
    }
}

/// Decodes the network's outputs on every sample and scores them against the
/// dataset's target allocations. Read-only and parallel across sample
/// chunks.
pub fn evaluate(
    net: &NetParams,
    ds: &Dataset,
    dims: &EncodingDims,
) -> Result<EvalMetrics, DnnError> {
    if net.fingerprint != ds.schema.scenario_fingerprint {
        return Err(DnnError::SchemaMismatch {
            net: net.fingerprint.clone(),
            data: ds.schema.scenario_fingerprint.clone(),
        });
    }
    if net.input_dim != ds.schema.input_len() {
        return Err(DnnError::DimensionMismatch {
            expected: ds.schema.input_len(),
            got: net.input_dim,
        });
    }
    if net.output_dim != ds.schema.output_len() || dims.output_len() != net.output_dim {
        return Err(DnnError::DimensionMismatch {
            expected: ds.schema.output_len(),
            got: net.output_dim,
        });
    }

    let samples = ds.samples.len();
    if samples == 0 {
        return Ok(EvalMetrics {
            field_accuracy: 0.0,
            exact_match_rate: 0.0,
            bit_accuracy: 0.0,
            samples: 0,
        });
    }

    const CHUNK: usize = 256;
    let chunks = samples.div_ceil(CHUNK);
    let value_bits_per_sample = dims.output_len() / 2;

    struct Counts {
        fields_right: u64,
        fields_total: u64,
        exact: u64,
        bits_right: u64,
    }

    let per_chunk: Vec<Result<Counts, DnnError>> = par::map_indexed(chunks, |chunk| {
        let lo = chunk * CHUNK;
        let hi = (lo + CHUNK).min(samples);
        let rows = hi - lo;
        let mut input = Array2::zeros((rows, net.input_dim));
        for (r, sample) in ds.samples[lo..hi].iter().enumerate() {
            for (c, v) in sample.input.iter().enumerate() {
                input[[r, c]] = *v;
            }
        }
        let activations = net.forward_batch(&input)?;
        let output = activations.last().expect("at least one layer");

        let mut counts = Counts {
            fields_right: 0,
            fields_total: 0,
            exact: 0,
            bits_right: 0,
        };
        for (r, sample) in ds.samples[lo..hi].iter().enumerate() {
            let row: Vec<f64> = output.row(r).to_vec();
            let predicted = decode_output(&row, dims).map_err(|_| DnnError::DimensionMismatch {
                expected: dims.output_len(),
                got: row.len(),
            })?;
            let target_acts: Vec<f64> = sample.target_bits.iter().map(|&b| b as f64).collect();
            let target = decode_output(&target_acts, dims).expect("clean target bits decode");

            let mut all_right = true;
            for (p, t) in predicted
                .power_idx
                .iter()
                .zip(target.power_idx.iter())
                .chain(predicted.assignment.iter().zip(target.assignment.iter()))
            {
                counts.fields_total += 1;
                if p == t {
                    counts.fields_right += 1;
                } else {
                    all_right = false;
                }
            }
            if all_right {
                counts.exact += 1;
            }

            // Value-bit accuracy: re-derive each decided bit from the
            // activations and compare with the stored target bit.
            let n = dims.bits_per_field as usize;
            let mut cursor = 0;
            while cursor < row.len() {
                for i in 0..n {
                    let bit = u8::from(row[cursor + i] > row[cursor + n + i]);
                    if bit == sample.target_bits[cursor + i] {
                        counts.bits_right += 1;
                    }
                }
                cursor += 2 * n;
            }
        }
        Ok(counts)
    });

    let mut fields_right = 0u64;
    let mut fields_total = 0u64;
    let mut exact = 0u64;
    let mut bits_right = 0u64;
    for counts in per_chunk {
        let c = counts?;
        fields_right += c.fields_right;
        fields_total += c.fields_total;
        exact += c.exact;
        bits_right += c.bits_right;
    }
    Ok(EvalMetrics {
        field_accuracy: fields_right as f64 / fields_total as f64,
        exact_match_rate: exact as f64 / samples as f64,
        bit_accuracy: bits_right as f64 / (samples as f64 * value_bits_per_sample as f64),
        samples,
    })
}
