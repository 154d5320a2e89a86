//! Property suite for the dataset encodings.

use ndarray::Array2;
use netalloc::dataset::{decode_output, encode_output, EncodingDims};
use netalloc::netmodel::Allocation;
use proptest::prelude::*;

fn dims_strategy() -> impl Strategy<Value = EncodingDims> {
    (1usize..4, 1usize..5, 1usize..4, 1usize..5).prop_flat_map(|(cells, users, subbands, levels)| {
        // n must index both users and levels.
        let need = users.max(levels);
        let min_bits = (usize::BITS - need.leading_zeros()).max(1);
        (min_bits..min_bits + 3).prop_map(move |bits| EncodingDims {
            cells,
            users_per_cell: users,
            subbands,
            bits_per_field: bits,
            power_levels: levels,
        })
    })
}

fn allocation_strategy(dims: EncodingDims) -> impl Strategy<Value = Allocation> {
    let slots = dims.cells * dims.subbands;
    (
        proptest::collection::vec(0..dims.power_levels, slots),
        proptest::collection::vec(0..dims.users_per_cell, slots),
    )
        .prop_map(move |(power, assign)| Allocation {
            power_idx: Array2::from_shape_fn((dims.cells, dims.subbands), |(k, f)| {
                power[k * dims.subbands + f]
            }),
            assignment: Array2::from_shape_fn((dims.cells, dims.subbands), |(k, f)| {
                assign[k * dims.subbands + f]
            }),
            utility: 0.0,
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lengths_match_the_closed_forms(dims in dims_strategy()) {
        prop_assert_eq!(
            dims.input_len(),
            dims.cells * dims.users_per_cell * (dims.subbands + 1)
        );
        prop_assert_eq!(
            dims.output_len(),
            2 * 2 * dims.bits_per_field as usize * dims.cells * dims.subbands
        );
    }

    #[test]
    fn encode_then_decode_is_identity(
        (dims, alloc) in dims_strategy().prop_flat_map(|d| {
            allocation_strategy(d).prop_map(move |a| (d, a))
        })
    ) {
        let bits = encode_output(&alloc, &dims).unwrap();
        prop_assert_eq!(bits.len(), dims.output_len());

        // Complement invariant at every paired position.
        let n = dims.bits_per_field as usize;
        let mut cursor = 0;
        while cursor < bits.len() {
            for i in 0..n {
                prop_assert_eq!(bits[cursor + i] ^ bits[cursor + n + i], 1);
            }
            cursor += 2 * n;
        }

        let acts: Vec<f64> = bits.iter().map(|&b| b as f64).collect();
        let decoded = decode_output(&acts, &dims).unwrap();
        prop_assert_eq!(decoded.power_idx, alloc.power_idx);
        prop_assert_eq!(decoded.assignment, alloc.assignment);
        prop_assert_eq!(decoded.clamped_fields, 0);
        prop_assert_eq!(decoded.ambiguous_bits, 0);
    }
}
