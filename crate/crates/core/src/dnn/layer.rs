//! Layers, activations, and forward passes.

use ndarray::{Array1, Array2, Axis};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::DnnError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Sigmoid,
    Softmax,
    Linear,
}

impl Activation {
    pub fn as_str(self) -> &'static str {
        match self {
            Activation::Sigmoid => "sigmoid",
            Activation::Softmax => "softmax",
            Activation::Linear => "linear",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "sigmoid" => Some(Activation::Sigmoid),
            "softmax" => Some(Activation::Softmax),
            "linear" => Some(Activation::Linear),
            _ => None,
        }
    }
}

/// One dense layer: weights `[out, in]`, a bias per output, an activation.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerParams {
    pub weights: Array2<f64>,
    pub biases: Array1<f64>,
    pub activation: Activation,
}

impl LayerParams {
    /// Uniform init in +-sqrt(6 / (fan_in + fan_out)), biases at zero.
    pub fn random(out_dim: usize, in_dim: usize, activation: Activation, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::random_from(out_dim, in_dim, activation, &mut rng)
    }

    /// `random` drawing from a caller-owned stream.
    pub fn random_from(
        out_dim: usize,
        in_dim: usize,
        activation: Activation,
        rng: &mut ChaCha8Rng,
    ) -> Self {
        let bound = (6.0 / (in_dim + out_dim) as f64).sqrt();
        let weights =
            Array2::from_shape_fn((out_dim, in_dim), |_| rng.random_range(-bound..bound));
        LayerParams {
            weights,
            biases: Array1::zeros(out_dim),
            activation,
        }
    }

    pub fn in_dim(&self) -> usize {
        self.weights.ncols()
    }

    pub fn out_dim(&self) -> usize {
        self.weights.nrows()
    }

    /// Forward pass on a batch of row vectors: `phi(X W^T + b)`.
    pub fn forward_batch(&self, input: &Array2<f64>) -> Result<Array2<f64>, DnnError> {
        if input.ncols() != self.in_dim() {
            return Err(DnnError::DimensionMismatch {
                expected: self.in_dim(),
                got: input.ncols(),
            });
        }
        let mut z = input.dot(&self.weights.t()) + &self.biases;
        match self.activation {
            Activation::Sigmoid => z.mapv_inplace(sigmoid),
            Activation::Softmax => softmax_rows(&mut z),
            Activation::Linear => {}
        }
        Ok(z)
    }
}

pub fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Row-wise softmax with max-shift for numerical stability; each row sums
/// to 1 up to rounding.
pub fn softmax_rows(z: &mut Array2<f64>) {
    for mut row in z.rows_mut() {
        let max = row.fold(f64::NEG_INFINITY, |m, &v| m.max(v));
        row.mapv_inplace(|v| (v - max).exp());
        let sum = row.sum();
        row.mapv_inplace(|v| v / sum);
    }
}

/// The complete network: hidden sigmoid layers capped by a softmax head.
#[derive(Debug, Clone, PartialEq)]
pub struct NetParams {
    pub layers: Vec<LayerParams>,
    pub input_dim: usize,
    pub output_dim: usize,
    /// Fingerprint of the scenario the training data came from.
    pub fingerprint: String,
}

impl NetParams {
    /// Stacks pretrained encoders under a softmax head.
    pub fn from_stack(
        encoders: Vec<LayerParams>,
        softmax: LayerParams,
        fingerprint: String,
    ) -> Result<Self, DnnError> {
        let mut layers = encoders;
        layers.push(softmax);
        let input_dim = layers[0].in_dim();
        let output_dim = layers.last().expect("softmax layer present").out_dim();
        let net = NetParams {
            layers,
            input_dim,
            output_dim,
            fingerprint,
        };
        net.check_dims()?;
        Ok(net)
    }

    /// Randomly initialized network with the given hidden widths.
    pub fn random(
        input_dim: usize,
        hidden: &[usize],
        output_dim: usize,
        fingerprint: String,
        seed: u64,
    ) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut layers = Vec::with_capacity(hidden.len() + 1);
        let mut prev = input_dim;
        for &width in hidden {
            layers.push(LayerParams::random_from(
                width,
                prev,
                Activation::Sigmoid,
                &mut rng,
            ));
            prev = width;
        }
        layers.push(LayerParams::random_from(
            output_dim,
            prev,
            Activation::Softmax,
            &mut rng,
        ));
        NetParams {
            layers,
            input_dim,
            output_dim,
            fingerprint,
        }
    }

    /// Chained dimensions, sigmoid hiddens, softmax head.
    pub fn check_dims(&self) -> Result<(), DnnError> {
        let mut prev = self.input_dim;
        for layer in &self.layers {
            if layer.in_dim() != prev {
                return Err(DnnError::DimensionMismatch {
                    expected: prev,
                    got: layer.in_dim(),
                });
            }
            prev = layer.out_dim();
        }
        if prev != self.output_dim {
            return Err(DnnError::DimensionMismatch {
                expected: self.output_dim,
                got: prev,
            });
        }
        let (head, hidden) = self
            .layers
            .split_last()
            .ok_or(DnnError::DimensionMismatch {
                expected: 1,
                got: 0,
            })?;
        if head.activation != Activation::Softmax
            || hidden.iter().any(|l| l.activation != Activation::Sigmoid)
        {
            return Err(DnnError::BadArchitecture);
        }
        Ok(())
    }

    /// Batch forward pass; returns the activations of every layer in order,
    /// the last entry being the softmax output.
    pub fn forward_batch(&self, input: &Array2<f64>) -> Result<Vec<Array2<f64>>, DnnError> {
        let mut activations = Vec::with_capacity(self.layers.len());
        let mut current = input.clone();
        for layer in &self.layers {
            current = layer.forward_batch(&current)?;
            activations.push(current.clone());
        }
        Ok(activations)
    }

    /// Single-sample forward pass: the output plus every layer's activation.
    pub fn forward(&self, x: &[f64]) -> Result<(Vec<f64>, Vec<Vec<f64>>), DnnError> {
        if x.len() != self.input_dim {
            return Err(DnnError::DimensionMismatch {
                expected: self.input_dim,
                got: x.len(),
            });
        }
        let input = Array2::from_shape_vec((1, x.len()), x.to_vec())
            .expect("shape matches by construction");
        let activations = self.forward_batch(&input)?;
        let per_layer: Vec<Vec<f64>> = activations
            .iter()
            .map(|a| a.index_axis(Axis(0), 0).to_vec())
            .collect();
        let output = per_layer.last().expect("at least one layer").clone();
        Ok((output, per_layer))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn zero_net_gives_half_activations_and_uniform_softmax() {
        let net = NetParams {
            layers: vec![
                LayerParams {
                    weights: Array2::zeros((4, 3)),
                    biases: Array1::zeros(4),
                    activation: Activation::Sigmoid,
                },
                LayerParams {
                    weights: Array2::zeros((5, 4)),
                    biases: Array1::zeros(5),
                    activation: Activation::Softmax,
                },
            ],
            input_dim: 3,
            output_dim: 5,
            fingerprint: String::new(),
        };
        let (output, acts) = net.forward(&[0.3, -0.7, 2.0]).unwrap();
        assert!(acts[0].iter().all(|&a| a == 0.5));
        for v in &output {
            assert_relative_eq!(*v, 0.2, max_relative = 1e-12);
        }
    }

    #[test]
    fn scalar_network_matches_hand_computation() {
        // One hidden unit: h = sigmoid(0.8 * 0.5 + 0.1), then a 2-way
        // softmax over (1.5 h, -0.25 h + 0.05).
        let net = NetParams {
            layers: vec![
                LayerParams {
                    weights: Array2::from_shape_vec((1, 1), vec![0.8]).unwrap(),
                    biases: Array1::from_vec(vec![0.1]),
                    activation: Activation::Sigmoid,
                },
                LayerParams {
                    weights: Array2::from_shape_vec((2, 1), vec![1.5, -0.25]).unwrap(),
                    biases: Array1::from_vec(vec![0.0, 0.05]),
                    activation: Activation::Softmax,
                },
            ],
            input_dim: 1,
            output_dim: 2,
            fingerprint: String::new(),
        };
        let (output, acts) = net.forward(&[0.5]).unwrap();
        let h = 1.0 / (1.0 + (-0.5f64 * 0.8 - 0.1).exp());
        assert_relative_eq!(acts[0][0], h, max_relative = 1e-12);
        let z0 = 1.5 * h;
        let z1 = -0.25 * h + 0.05;
        let e0 = (z0 - z0.max(z1)).exp();
        let e1 = (z1 - z0.max(z1)).exp();
        assert_relative_eq!(output[0], e0 / (e0 + e1), max_relative = 1e-12);
        assert_relative_eq!(output[1], e1 / (e0 + e1), max_relative = 1e-12);
    }

    #[test]
    fn softmax_rows_sum_to_one_for_random_inputs() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let cols = rng.random_range(2..40);
            let mut z = Array2::from_shape_fn((4, cols), |_| rng.random_range(-60.0..60.0));
            softmax_rows(&mut z);
            for row in z.rows() {
                assert!((row.sum() - 1.0).abs() < 1e-9);
                assert!(row.iter().all(|&v| v >= 0.0));
            }
        }
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let net = NetParams::random(4, &[3], 2, String::new(), 1);
        assert!(matches!(
            net.forward(&[0.0; 5]),
            Err(DnnError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn random_init_stays_within_fan_bound() {
        let layer = LayerParams::random(30, 20, Activation::Sigmoid, 9);
        let bound = (6.0 / 50.0f64).sqrt();
        assert!(layer.weights.iter().all(|w| w.abs() <= bound));
        assert!(layer.biases.iter().all(|&b| b == 0.0));
        // Same seed, same weights.
        let again = LayerParams::random(30, 20, Activation::Sigmoid, 9);
        assert_eq!(layer, again);
    }
}
