//! Cross-checks of the network model against independent re-implementations
//! and property suites over random instances.

use ndarray::Array2;
use netalloc::netmodel::{
    feasible_power_vectors, network_utility, sample_realization, sinr, Allocation, BsLayout,
    NetworkRealization, ScenarioConfig,
};
use proptest::prelude::*;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn scenario(num_cells: usize, subbands: usize, users: usize) -> ScenarioConfig {
    ScenarioConfig {
        num_cells,
        subbands,
        users_per_cell: users,
        cell_radius: 500.0,
        max_power: 40.0,
        power_levels: vec![6.4, 12.8, 19.2],
        subband_bandwidth: 2.88e6,
        noise_density: -174.0,
        target_ber: 1e-6,
        shadowing_sigma: 8.0,
        bits_per_field: 3,
        bs_layout: BsLayout::Linear,
        rng_seed: 0,
        cqi_mapping: Default::default(),
    }
}

/// Deliberately naive utility: iterates every user of every cell and applies
/// the assignment indicator term by term, mirroring the definition rather
/// than the implementation.
fn naive_utility(real: &NetworkRealization, alloc: &Allocation, cfg: &ScenarioConfig) -> f64 {
    let alpha = -1.5 / (5.0 * cfg.target_ber).ln();
    let powers = alloc.powers_w(cfg);
    let mut total = 0.0;
    for cell in 0..cfg.num_cells {
        for local in 0..cfg.users_per_cell {
            for sub in 0..cfg.subbands {
                if alloc.assignment[[cell, sub]] == local {
                    let user = cell * cfg.users_per_cell + local;
                    let mut interference = 0.0;
                    for other in 0..cfg.num_cells {
                        if other != cell {
                            interference +=
                                powers[[other, sub]] * real.link_gain[[user, other, sub]];
                        }
                    }
                    let s = powers[[cell, sub]] * real.link_gain[[user, cell, sub]]
                        / (real.noise_power_w + interference);
                    total += cfg.subband_bandwidth * (1.0 + alpha * s).log2();
                }
            }
        }
    }
    total
}

fn random_allocation(cfg: &ScenarioConfig, seed: u64) -> Allocation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let feasible = feasible_power_vectors(cfg);
    let mut power_idx = Array2::zeros((cfg.num_cells, cfg.subbands));
    for cell in 0..cfg.num_cells {
        let pick = rng.random_range(0..feasible.len());
        for sub in 0..cfg.subbands {
            power_idx[[cell, sub]] = feasible[pick][sub];
        }
    }
    let assignment = Array2::from_shape_fn((cfg.num_cells, cfg.subbands), |_| {
        rng.random_range(0..cfg.users_per_cell)
    });
    Allocation {
        power_idx,
        assignment,
        utility: 0.0,
    }
}

#[test]
fn utility_matches_the_naive_indicator_sum() {
    for seed in 0..50u64 {
        let cfg = scenario(2 + (seed % 3) as usize, 1 + (seed % 3) as usize, 3);
        let real = sample_realization(&cfg, 7000 + seed);
        let alloc = random_allocation(&cfg, 8000 + seed);
        let fast = network_utility(&real, &alloc, &cfg);
        let naive = naive_utility(&real, &alloc, &cfg);
        let rel = (fast - naive).abs() / naive.abs().max(f64::MIN_POSITIVE);
        assert!(
            rel < 1e-12,
            "seed {seed}: {fast} vs naive {naive} (rel {rel:.3e})"
        );
    }
}

#[test]
fn zero_gain_network_has_zero_utility() {
    let cfg = scenario(2, 2, 2);
    let mut real = sample_realization(&cfg, 1);
    real.link_gain.fill(0.0);
    let alloc = random_allocation(&cfg, 2);
    assert_eq!(network_utility(&real, &alloc, &cfg), 0.0);
}

#[test]
fn single_term_utility_is_the_closed_form() {
    let cfg = ScenarioConfig {
        num_cells: 1,
        subbands: 1,
        users_per_cell: 1,
        ..scenario(1, 1, 1)
    };
    let real = sample_realization(&cfg, 3);
    let alloc = Allocation {
        power_idx: Array2::from_elem((1, 1), 2usize),
        assignment: Array2::zeros((1, 1)),
        utility: 0.0,
    };
    let s = sinr(&real, &alloc.powers_w(&cfg), 0, 0, 0);
    let expected = cfg.subband_bandwidth * (1.0 + cfg.alpha() * s).log2();
    let got = network_utility(&real, &alloc, &cfg);
    assert!((got - expected).abs() / expected.abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn sinr_strictly_increases_in_serving_power(seed in 0u64..5000, bump in 1.01f64..4.0) {
        let cfg = scenario(3, 2, 2);
        let real = sample_realization(&cfg, seed);
        let powers = real.reference_powers_w(&cfg);
        let base = sinr(&real, &powers, 0, 0, 0);
        let mut raised = powers.clone();
        raised[[0, 0]] *= bump;
        prop_assert!(sinr(&real, &raised, 0, 0, 0) > base);
    }

    #[test]
    fn sinr_never_increases_when_an_interferer_raises_power(
        seed in 0u64..5000,
        interferer in 1usize..3,
        bump in 1.01f64..4.0,
    ) {
        let cfg = scenario(3, 2, 2);
        let real = sample_realization(&cfg, seed);
        let powers = real.reference_powers_w(&cfg);
        let base = sinr(&real, &powers, 0, 0, 0);
        let mut raised = powers.clone();
        raised[[interferer, 0]] *= bump;
        prop_assert!(sinr(&real, &raised, 0, 0, 0) <= base);
    }

    #[test]
    fn realizations_are_bitwise_deterministic(seed in 0u64..2000) {
        let cfg = scenario(2, 2, 2);
        let a = sample_realization(&cfg, seed);
        let b = sample_realization(&cfg, seed);
        prop_assert_eq!(a.link_gain, b.link_gain);
        prop_assert_eq!(a.cqi, b.cqi);
        prop_assert_eq!(a.user_positions, b.user_positions);
        prop_assert_eq!(a.reference_power_idx, b.reference_power_idx);
    }

    #[test]
    fn feasible_enumeration_equals_brute_force_filter(
        levels_count in 2usize..5,
        subbands in 1usize..4,
        budget_scale in 0.3f64..1.5,
    ) {
        let levels: Vec<f64> = (1..=levels_count).map(|i| i as f64 * 4.0).collect();
        let max_power = (levels[0] * subbands as f64)
            .max(budget_scale * levels.iter().sum::<f64>() * subbands as f64 / levels_count as f64);
        let cfg = ScenarioConfig {
            power_levels: levels.clone(),
            subbands,
            max_power,
            ..scenario(2, subbands, 2)
        };
        let got = feasible_power_vectors(&cfg);

        // Independent filter over the whole Cartesian product.
        let mut expected = Vec::new();
        let total = levels_count.pow(subbands as u32);
        for code in 0..total {
            let mut tuple = Vec::with_capacity(subbands);
            let mut rem = code;
            for _ in 0..subbands {
                tuple.push(rem % levels_count);
                rem /= levels_count;
            }
            tuple.reverse();
            let sum: f64 = tuple.iter().map(|&i| levels[i]).sum();
            if sum <= max_power + 1e-12 {
                expected.push(tuple);
            }
        }
        expected.sort();
        prop_assert_eq!(got, expected);
    }
}
