//! Allocation solvers: greedy sub-band assignment, an exhaustive-search
//! oracle over feasible power vectors, and a genetic algorithm.

mod assign;
mod exhaustive;
mod ga;

pub use assign::assign_subbands;
pub use exhaustive::{exhaustive_search, exhaustive_search_with_cap, DEFAULT_SEARCH_CAP};
pub use ga::{ga_solve, ga_solve_traced, GaConfig, GaTrace};

use ndarray::Array2;
use thiserror::Error;

use crate::netmodel::{Allocation, NetworkRealization, ScenarioConfig};

/// How a solution was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    Exhaustive,
    Ga,
}

impl SolveMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveMethod::Exhaustive => "exhaustive",
            SolveMethod::Ga => "ga",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "exhaustive" => Some(SolveMethod::Exhaustive),
            "ga" => Some(SolveMethod::Ga),
            _ => None,
        }
    }
}

impl std::fmt::Display for SolveMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error)]
pub enum SolverError {
    #[error(
        "exhaustive search refused: {candidates:.3e} candidate power configurations exceed the cap of {cap:.3e}"
    )]
    SearchSpaceExceeded { candidates: f64, cap: f64 },
}

/// A solved instance: the best allocation found plus bookkeeping for
/// solver comparisons.
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub allocation: Allocation,
    /// Distinct utility evaluations performed (repeat candidates are served
    /// from a cache and not recounted).
    pub fitness_evals: u64,
    /// Wall-clock duration of the solve, in seconds. Reported, never
    /// asserted: timing is hardware-dependent.
    pub wall_time: f64,
    pub method: SolveMethod,
}

/// Network utility of a power configuration under its best sub-band
/// assignment. Because per-(cell, subband) assignment choices are
/// independent once powers are fixed, this equals the utility of
/// `assign_subbands`.
pub fn fitness(
    real: &NetworkRealization,
    power_idx: &Array2<usize>,
    cfg: &ScenarioConfig,
) -> f64 {
    let powers_w = power_idx.map(|&idx| cfg.power_levels[idx]);
    fitness_of_watts(real, &powers_w, cfg)
}

/// `fitness` on a pre-resolved wattage matrix; shared by the hot loops.
pub(crate) fn fitness_of_watts(
    real: &NetworkRealization,
    powers_w: &Array2<f64>,
    cfg: &ScenarioConfig,
) -> f64 {
    let alpha = cfg.alpha();
    let mut total = 0.0;
    for cell in 0..cfg.num_cells {
        for sub in 0..cfg.subbands {
            let mut best = f64::NEG_INFINITY;
            for local in 0..cfg.users_per_cell {
                let user = cfg.global_user(cell, local);
                let s = crate::netmodel::sinr(real, powers_w, user, cell, sub);
                if s > best {
                    best = s;
                }
            }
            total += cfg.subband_bandwidth * (1.0 + alpha * best).log2();
        }
    }
    total
}

/// Builds the full allocation for a power configuration: greedy assignment
/// plus its utility.
pub(crate) fn complete_allocation(
    real: &NetworkRealization,
    power_idx: Array2<usize>,
    cfg: &ScenarioConfig,
) -> Allocation {
    let powers_w = power_idx.map(|&idx| cfg.power_levels[idx]);
    let assignment = assign_subbands(real, &powers_w, cfg);
    let utility = crate::netmodel::network_utility(
        real,
        &Allocation {
            power_idx: power_idx.clone(),
            assignment: assignment.clone(),
            utility: 0.0,
        },
        cfg,
    );
    Allocation {
        power_idx,
        assignment,
        utility,
    }
}
