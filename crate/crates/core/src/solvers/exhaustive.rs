//! Exhaustive enumeration of feasible power configurations: the global
//! optimality oracle the GA is measured against.

use std::time::Instant;

use ndarray::Array2;

use crate::netmodel::{feasible_power_vectors, NetworkRealization, ScenarioConfig};
use crate::par;

use super::{complete_allocation, fitness_of_watts, SolveMethod, SolveResult, SolverError};

/// Default ceiling on the number of enumerated power configurations.
pub const DEFAULT_SEARCH_CAP: f64 = 5e7;

/// `exhaustive_search` with the default safety cap.
pub fn exhaustive_search(
    real: &NetworkRealization,
    cfg: &ScenarioConfig,
) -> Result<SolveResult, SolverError> {
    exhaustive_search_with_cap(real, cfg, DEFAULT_SEARCH_CAP)
}

/// Enumerates every combination of feasible per-cell power vectors and
/// returns the utility-maximizing allocation.
///
/// Ties are broken toward the lexicographically smallest flattened power
/// matrix; because the per-cell feasible list is lexicographically sorted,
/// that is the candidate with the lowest enumeration index. Refuses to run
/// when `|feasible|^K` exceeds `cap`.
pub fn exhaustive_search_with_cap(
    real: &NetworkRealization,
    cfg: &ScenarioConfig,
    cap: f64,
) -> Result<SolveResult, SolverError> {
    let start = Instant::now();
    let feasible = feasible_power_vectors(cfg);
    let per_cell = feasible.len();
    let k = cfg.num_cells;

    let candidates_f = (per_cell as f64).powi(k as i32);
    if candidates_f > cap {
        return Err(SolverError::SearchSpaceExceeded {
            candidates: candidates_f,
            cap,
        });
    }
    let total = candidates_f as u64;

    // Candidate `i` in mixed radix, cell 0 most significant, so increasing
    // index is exactly lexicographic order of the flattened power matrix.
    let decode = |index: u64| -> Array2<usize> {
        let mut power_idx = Array2::zeros((k, cfg.subbands));
        let mut rem = index;
        for cell in (0..k).rev() {
            let choice = (rem % per_cell as u64) as usize;
            rem /= per_cell as u64;
            for sub in 0..cfg.subbands {
                power_idx[[cell, sub]] = feasible[choice][sub];
            }
        }
        power_idx
    };

    // Evaluate in parallel chunks; the reduction keeps the lowest index on
    // exact fitness ties, so the result is independent of scheduling.
    const CHUNK: u64 = 4096;
    let chunks = total.div_ceil(CHUNK);
    let per_chunk_best = par::map_indexed(chunks as usize, |chunk| {
        let lo = chunk as u64 * CHUNK;
        let hi = (lo + CHUNK).min(total);
        let mut best: Option<(f64, u64)> = None;
        for index in lo..hi {
            let power_idx = decode(index);
            let powers_w = power_idx.map(|&idx| cfg.power_levels[idx]);
            let fit = fitness_of_watts(real, &powers_w, cfg);
            if best.map_or(true, |(bf, _)| fit > bf) {
                best = Some((fit, index));
            }
        }
        best
    });

    let (_, best_index) = per_chunk_best
        .into_iter()
        .flatten()
        .fold(None::<(f64, u64)>, |acc, cand| match acc {
            None => Some(cand),
            Some(best) => {
                if cand.0 > best.0 || (cand.0 == best.0 && cand.1 < best.1) {
                    Some(cand)
                } else {
                    Some(best)
                }
            }
        })
        .expect("at least one feasible candidate is guaranteed by config validation");

    let allocation = complete_allocation(real, decode(best_index), cfg);
    Ok(SolveResult {
        allocation,
        fitness_evals: total,
        wall_time: start.elapsed().as_secs_f64(),
        method: SolveMethod::Exhaustive,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netmodel::{sample_realization, BsLayout};

    fn cfg(num_cells: usize, levels: Vec<f64>, subbands: usize, max_power: f64) -> ScenarioConfig {
        ScenarioConfig {
            num_cells,
            subbands,
            users_per_cell: 2,
            cell_radius: 500.0,
            max_power,
            power_levels: levels,
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

    #[test]
    fn enumerates_the_expected_candidate_count() {
        // 17 feasible vectors per cell at the reference levels, 4 cells.
        let cfg = cfg(4, vec![6.4, 12.8, 19.2], 3, 40.0);
        let real = sample_realization(&cfg, 33);
        let result = exhaustive_search(&real, &cfg).unwrap();
        assert_eq!(result.fitness_evals, 83_521);
        assert!(result.allocation.is_feasible(&cfg));
    }

    #[test]
    fn refuses_oversized_spaces() {
        // 5 levels, 5 sub-bands, no binding budget: 3125^15 candidates.
        let cfg = cfg(15, vec![1.0, 2.0, 3.0, 4.0, 5.0], 5, 1000.0);
        let real = sample_realization(&cfg, 34);
        let err = exhaustive_search(&real, &cfg).unwrap_err();
        match err {
            SolverError::SearchSpaceExceeded { candidates, cap } => {
                assert!(candidates > cap);
                assert!((candidates - 3125f64.powi(15)).abs() / candidates < 1e-12);
            }
        }
    }

    #[test]
    fn single_feasible_vector_short_circuits() {
        // One level, budget exactly F * level: only the all-min vector fits.
        let cfg = cfg(3, vec![10.0], 2, 20.0);
        let real = sample_realization(&cfg, 35);
        let result = exhaustive_search(&real, &cfg).unwrap();
        assert_eq!(result.fitness_evals, 1);
        assert!(result.allocation.power_idx.iter().all(|&p| p == 0));
    }

    #[test]
    fn optimum_dominates_every_feasible_candidate() {
        let cfg = cfg(2, vec![6.4, 12.8, 19.2], 2, 30.0);
        let real = sample_realization(&cfg, 36);
        let best = exhaustive_search(&real, &cfg).unwrap();
        let feas = feasible_power_vectors(&cfg);
        for a in &feas {
            for b in &feas {
                let mut power_idx = Array2::zeros((2, 2));
                for sub in 0..2 {
                    power_idx[[0, sub]] = a[sub];
                    power_idx[[1, sub]] = b[sub];
                }
                let fit = super::super::fitness(&real, &power_idx, &cfg);
                assert!(fit <= best.allocation.utility * (1.0 + 1e-12));
            }
        }
    }
}
