//! Greedy per-(cell, subband) user assignment.

use ndarray::Array2;

use crate::netmodel::{sinr, NetworkRealization, ScenarioConfig};

/// Assigns each (cell, subband) to the local user with the highest SINR
/// under the given powers, ties broken by the lowest user index.
///
/// With powers fixed, the per-(cell, subband) choices are independent, so
/// this greedy rule is exactly optimal for the assignment subproblem.
pub fn assign_subbands(
    real: &NetworkRealization,
    powers_w: &Array2<f64>,
    cfg: &ScenarioConfig,
) -> Array2<usize> {
    let mut assignment = Array2::zeros((cfg.num_cells, cfg.subbands));
    for cell in 0..cfg.num_cells {
        for sub in 0..cfg.subbands {
            let mut best_user = 0usize;
            let mut best_sinr = f64::NEG_INFINITY;
            for local in 0..cfg.users_per_cell {
                let user = cfg.global_user(cell, local);
                let s = sinr(real, powers_w, user, cell, sub);
                if s > best_sinr {
                    best_sinr = s;
                    best_user = local;
                }
            }
            assignment[[cell, sub]] = best_user;
        }
    }
    assignment
}
