//! Bit-level input/output encodings between network state and DNN tensors.
//!
//! Inputs: per cell, per user, the F CQI values scaled to [0, 1] followed by
//! the cell-edge indicator, giving K*U*(F+1) features. Outputs: per
//! (cell, subband), the n-bit big-endian power index, its bitwise
//! complement, the n-bit assigned-user index, and its complement, giving
//! 2*2*n*K*F bits. Decoding compares each value bit's activation against its
//! complement's.

use ndarray::Array2;
use thiserror::Error;

use crate::netmodel::{Allocation, NetworkRealization, ScenarioConfig};

/// The dimensions that fix both encodings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EncodingDims {
    pub cells: usize,
    pub users_per_cell: usize,
    pub subbands: usize,
    pub bits_per_field: u32,
    pub power_levels: usize,
}

impl EncodingDims {
    pub fn from_scenario(cfg: &ScenarioConfig) -> Self {
        EncodingDims {
            cells: cfg.num_cells,
            users_per_cell: cfg.users_per_cell,
            subbands: cfg.subbands,
            bits_per_field: cfg.bits_per_field,
            power_levels: cfg.num_levels(),
        }
    }

    /// K * U * (F + 1)
    pub fn input_len(&self) -> usize {
        self.cells * self.users_per_cell * (self.subbands + 1)
    }

    /// 2 * 2 * n * K * F: two fields per (cell, subband), each with value
    /// and complement bits.
    pub fn output_len(&self) -> usize {
        2 * 2 * self.bits_per_field as usize * self.cells * self.subbands
    }
}

#[derive(Debug, Error)]
pub enum EncodeError {
    #[error("field value {value} does not fit in {bits} bits")]
    FieldOverflow { value: usize, bits: u32 },
    #[error("activation vector has length {got}, expected {expected}")]
    LengthMismatch { got: usize, expected: usize },
}

/// Flattens a realization's CQI reports and edge indicators into the DNN
/// input layout: cells ascending, users ascending, F scaled CQI values then
/// the indicator.
pub fn encode_input(real: &NetworkRealization, cfg: &ScenarioConfig) -> Vec<f64> {
    let mut out = Vec::with_capacity(EncodingDims::from_scenario(cfg).input_len());
    for cell in 0..cfg.num_cells {
        for local in 0..cfg.users_per_cell {
            let user = cfg.global_user(cell, local);
            for sub in 0..cfg.subbands {
                out.push(real.cqi[[user, sub]] as f64 / 15.0);
            }
            out.push(real.location_indicator[user] as f64);
        }
    }
    out
}

fn push_bits(out: &mut Vec<u8>, value: usize, bits: u32) -> Result<(), EncodeError> {
    if value >= (1usize << bits) {
        return Err(EncodeError::FieldOverflow { value, bits });
    }
    for i in (0..bits).rev() {
        out.push(((value >> i) & 1) as u8);
    }
    for i in (0..bits).rev() {
        out.push((((value >> i) & 1) ^ 1) as u8);
    }
    Ok(())
}

/// Encodes an allocation as the target bit vector: per (cell, subband) in
/// row-major order, the power index and its complement, then the assigned
/// user and its complement, each n bits big-endian.
pub fn encode_output(alloc: &Allocation, dims: &EncodingDims) -> Result<Vec<u8>, EncodeError> {
    let mut out = Vec::with_capacity(dims.output_len());
    for cell in 0..dims.cells {
        for sub in 0..dims.subbands {
            push_bits(&mut out, alloc.power_idx[[cell, sub]], dims.bits_per_field)?;
            push_bits(&mut out, alloc.assignment[[cell, sub]], dims.bits_per_field)?;
        }
    }
    Ok(out)
}

/// Indices recovered from a network output, with decode diagnostics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodedAllocation {
    pub power_idx: Array2<usize>,
    pub assignment: Array2<usize>,
    /// Fields whose raw decoded value fell outside the valid range and was
    /// clamped to the nearest valid index.
    pub clamped_fields: usize,
    /// Bit positions where the value activation exactly tied its complement
    /// (resolved to 0).
    pub ambiguous_bits: usize,
}

/// Decodes activations by comparing each value bit against its complement:
/// the bit is 1 iff the value activation strictly exceeds the complement's.
pub fn decode_output(
    activations: &[f64],
    dims: &EncodingDims,
) -> Result<DecodedAllocation, EncodeError> {
    if activations.len() != dims.output_len() {
        return Err(EncodeError::LengthMismatch {
            got: activations.len(),
            expected: dims.output_len(),
        });
    }
    let n = dims.bits_per_field as usize;
    let mut power_idx = Array2::zeros((dims.cells, dims.subbands));
    let mut assignment = Array2::zeros((dims.cells, dims.subbands));
    let mut clamped_fields = 0usize;
    let mut ambiguous_bits = 0usize;
    let mut cursor = 0usize;

    let mut read_field = |cursor: &mut usize, max_exclusive: usize| {
        let mut value = 0usize;
        for i in 0..n {
            let act = activations[*cursor + i];
            let comp = activations[*cursor + n + i];
            if act == comp {
                ambiguous_bits += 1;
            }
            if act > comp {
                value |= 1 << (n - 1 - i);
            }
        }
        *cursor += 2 * n;
        if value >= max_exclusive {
            clamped_fields += 1;
            max_exclusive - 1
        } else {
            value
        }
    };

    for cell in 0..dims.cells {
        for sub in 0..dims.subbands {
            power_idx[[cell, sub]] = read_field(&mut cursor, dims.power_levels);
            assignment[[cell, sub]] = read_field(&mut cursor, dims.users_per_cell);
        }
    }
    Ok(DecodedAllocation {
        power_idx,
        assignment,
        clamped_fields,
        ambiguous_bits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netmodel::{sample_realization, BsLayout};
    use ndarray::Array2;

    fn cfg(k: usize, u: usize, f: usize, n: u32, levels: usize) -> ScenarioConfig {
        ScenarioConfig {
            num_cells: k,
            subbands: f,
            users_per_cell: u,
            cell_radius: 500.0,
            max_power: 1000.0,
            power_levels: (1..=levels).map(|i| i as f64 * 6.4).collect(),
            subband_bandwidth: 2.88e6,
            noise_density: -174.0,
            target_ber: 1e-6,
            shadowing_sigma: 8.0,
            bits_per_field: n,
            bs_layout: BsLayout::Linear,
            rng_seed: 0,
            cqi_mapping: Default::default(),
        }
    }

    #[test]
    fn input_length_at_reference_dimensions() {
        let cfg = cfg(5, 5, 3, 3, 3);
        let real = sample_realization(&cfg, 60);
        let input = encode_input(&real, &cfg);
        assert_eq!(input.len(), 100);
        assert!(input.iter().all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn input_layout_groups_by_user() {
        // Entry layout per user: F scaled CQI slots then the indicator.
        let cfg = cfg(2, 2, 3, 3, 3);
        let real = sample_realization(&cfg, 61);
        let input = encode_input(&real, &cfg);
        assert_eq!(input.len(), 2 * 2 * 4);
        for cell in 0..2 {
            for local in 0..2 {
                let user = cfg.global_user(cell, local);
                let base = (cell * 2 + local) * 4;
                for sub in 0..3 {
                    assert_eq!(input[base + sub], real.cqi[[user, sub]] as f64 / 15.0);
                }
                assert_eq!(input[base + 3], real.location_indicator[user] as f64);
            }
        }
    }

    #[test]
    fn output_length_and_complement_example() {
        let dims = EncodingDims {
            cells: 5,
            users_per_cell: 5,
            subbands: 3,
            bits_per_field: 3,
            power_levels: 3,
        };
        assert_eq!(dims.output_len(), 180);

        // Value 3 in 3 bits is 011; its complement is 100.
        let mut bits = Vec::new();
        push_bits(&mut bits, 3, 3).unwrap();
        assert_eq!(bits, vec![0, 1, 1, 1, 0, 0]);
    }

    #[test]
    fn complement_bit_pairs_xor_to_one() {
        let dims = EncodingDims {
            cells: 2,
            users_per_cell: 2,
            subbands: 2,
            bits_per_field: 2,
            power_levels: 2,
        };
        let alloc = Allocation {
            power_idx: Array2::from_shape_vec((2, 2), vec![0, 1, 1, 0]).unwrap(),
            assignment: Array2::from_shape_vec((2, 2), vec![1, 0, 0, 1]).unwrap(),
            utility: 0.0,
        };
        let bits = encode_output(&alloc, &dims).unwrap();
        assert_eq!(bits.len(), dims.output_len());
        let n = dims.bits_per_field as usize;
        let mut cursor = 0;
        while cursor < bits.len() {
            for i in 0..n {
                assert_eq!(bits[cursor + i] ^ bits[cursor + n + i], 1);
            }
            cursor += 2 * n;
        }
    }

    #[test]
    fn field_overflow_is_rejected() {
        let dims = EncodingDims {
            cells: 1,
            users_per_cell: 2,
            subbands: 1,
            bits_per_field: 2,
            power_levels: 2,
        };
        let alloc = Allocation {
            power_idx: Array2::from_elem((1, 1), 4usize),
            assignment: Array2::from_elem((1, 1), 0usize),
            utility: 0.0,
        };
        assert!(matches!(
            encode_output(&alloc, &dims),
            Err(EncodeError::FieldOverflow { .. })
        ));
    }

    #[test]
    fn decode_inverts_encode_over_full_small_space() {
        // Exhaustive round trip over every allocation of a K=2, F=2, U=2,
        // L=2 scenario (including infeasible power combinations: the
        // encoding is oblivious to the budget).
        let dims = EncodingDims {
            cells: 2,
            users_per_cell: 2,
            subbands: 2,
            bits_per_field: 2,
            power_levels: 2,
        };
        for packed in 0..(1usize << 8) {
            let field = |i: usize| (packed >> i) & 1;
            let alloc = Allocation {
                power_idx: Array2::from_shape_vec(
                    (2, 2),
                    vec![field(0), field(1), field(2), field(3)],
                )
                .unwrap(),
                assignment: Array2::from_shape_vec(
                    (2, 2),
                    vec![field(4), field(5), field(6), field(7)],
                )
                .unwrap(),
                utility: 0.0,
            };
            let bits = encode_output(&alloc, &dims).unwrap();
            let acts: Vec<f64> = bits.iter().map(|&b| b as f64).collect();
            let decoded = decode_output(&acts, &dims).unwrap();
            assert_eq!(decoded.power_idx, alloc.power_idx);
            assert_eq!(decoded.assignment, alloc.assignment);
            assert_eq!(decoded.clamped_fields, 0);
            assert_eq!(decoded.ambiguous_bits, 0);
        }
    }

    #[test]
    fn uniform_activations_decode_to_zero_and_flag_everything() {
        let dims = EncodingDims {
            cells: 2,
            users_per_cell: 2,
            subbands: 2,
            bits_per_field: 2,
            power_levels: 2,
        };
        let acts = vec![0.5; dims.output_len()];
        let decoded = decode_output(&acts, &dims).unwrap();
        assert!(decoded.power_idx.iter().all(|&v| v == 0));
        assert!(decoded.assignment.iter().all(|&v| v == 0));
        assert_eq!(decoded.ambiguous_bits, dims.output_len() / 2);
    }

    #[test]
    fn decoding_survives_bounded_noise() {
        use rand::Rng;
        use rand::SeedableRng;
        let dims = EncodingDims {
            cells: 2,
            users_per_cell: 2,
            subbands: 2,
            bits_per_field: 2,
            power_levels: 2,
        };
        let alloc = Allocation {
            power_idx: Array2::from_shape_vec((2, 2), vec![1, 0, 1, 1]).unwrap(),
            assignment: Array2::from_shape_vec((2, 2), vec![0, 1, 1, 0]).unwrap(),
            utility: 0.0,
        };
        let bits = encode_output(&alloc, &dims).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let acts: Vec<f64> = bits
                .iter()
                .map(|&b| b as f64 + rng.random_range(-0.2..0.2))
                .collect();
            let decoded = decode_output(&acts, &dims).unwrap();
            assert_eq!(decoded.power_idx, alloc.power_idx);
            assert_eq!(decoded.assignment, alloc.assignment);
        }
    }

    #[test]
    fn out_of_range_fields_clamp_and_flag() {
        // n=2 encodes value 3, but only 2 power levels / 2 users exist.
        let dims = EncodingDims {
            cells: 1,
            users_per_cell: 2,
            subbands: 1,
            bits_per_field: 2,
            power_levels: 2,
        };
        let acts = vec![1.0, 1.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0];
        let decoded = decode_output(&acts, &dims).unwrap();
        assert_eq!(decoded.power_idx[[0, 0]], 1);
        assert_eq!(decoded.assignment[[0, 0]], 1);
        assert_eq!(decoded.clamped_fields, 2);
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let dims = EncodingDims {
            cells: 1,
            users_per_cell: 2,
            subbands: 1,
            bits_per_field: 2,
            power_levels: 2,
        };
        assert!(matches!(
            decode_output(&[0.0; 7], &dims),
            Err(EncodeError::LengthMismatch { .. })
        ));
    }
}
