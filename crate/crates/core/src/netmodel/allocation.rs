//! Allocations (per-cell power vectors plus sub-band assignments), the
//! network utility they score, and enumeration of feasible power vectors.

use ndarray::Array2;

use super::realization::{sinr, NetworkRealization};
use super::scenario::ScenarioConfig;

/// One joint allocation: per-(cell, subband) power-level index and assigned
/// local user, plus its utility.
#[derive(Debug, Clone, PartialEq)]
pub struct Allocation {
    /// Index into `ScenarioConfig::power_levels` per `[cell, subband]`.
    pub power_idx: Array2<usize>,
    /// Assigned local user (within the cell) per `[cell, subband]`.
    pub assignment: Array2<usize>,
    /// Network utility of this allocation in bit/s.
    pub utility: f64,
}

impl Allocation {
    /// Powers in watts resolved against the scenario's levels.
    pub fn powers_w(&self, cfg: &ScenarioConfig) -> Array2<f64> {
        self.power_idx.map(|&idx| cfg.power_levels[idx])
    }

    /// Checks the per-cell power budget and assignment ranges.
    pub fn is_feasible(&self, cfg: &ScenarioConfig) -> bool {
        let budget_ok = (0..cfg.num_cells).all(|k| {
            let total: f64 = (0..cfg.subbands)
                .map(|f| cfg.power_levels[self.power_idx[[k, f]]])
                .sum();
            total <= cfg.max_power + 1e-12
        });
        let users_ok = self.assignment.iter().all(|&u| u < cfg.users_per_cell);
        let levels_ok = self.power_idx.iter().all(|&p| p < cfg.num_levels());
        budget_ok && users_ok && levels_ok
    }
}

/// Total network utility: for every (cell, subband), the assigned user's
/// spectral term `B log2(1 + alpha * SINR)`, summed over the network.
pub fn network_utility(
    real: &NetworkRealization,
    alloc: &Allocation,
    cfg: &ScenarioConfig,
) -> f64 {
    let powers = alloc.powers_w(cfg);
    utility_of_powers(real, &powers, &alloc.assignment, cfg)
}

/// Utility for an explicit (powers in watts, assignment) pair.
pub(crate) fn utility_of_powers(
    real: &NetworkRealization,
    powers_w: &Array2<f64>,
    assignment: &Array2<usize>,
    cfg: &ScenarioConfig,
) -> f64 {
    let alpha = cfg.alpha();
    let mut total = 0.0;
    for cell in 0..cfg.num_cells {
        for sub in 0..cfg.subbands {
            let user = cfg.global_user(cell, assignment[[cell, sub]]);
            let s = sinr(real, powers_w, user, cell, sub);
            total += cfg.subband_bandwidth * (1.0 + alpha * s).log2();
        }
    }
    total
}

/// All power-level index tuples of length `subbands` whose summed wattage
/// stays within the cell budget, in lexicographic order.
pub fn feasible_power_vectors(cfg: &ScenarioConfig) -> Vec<Vec<usize>> {
    let levels = cfg.num_levels();
    let f = cfg.subbands;
    let mut out = Vec::new();
    let mut current = vec![0usize; f];
    loop {
        let total: f64 = current.iter().map(|&idx| cfg.power_levels[idx]).sum();
        if total <= cfg.max_power + 1e-12 {
            out.push(current.clone());
        }
        // Lexicographic odometer over {0..levels}^f.
        let mut pos = f;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            current[pos] += 1;
            if current[pos] < levels {
                break;
            }
            current[pos] = 0;
        }
    }
}
