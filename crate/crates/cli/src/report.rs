//! Machine-readable reports: every persisted number is a pure function of
//! the flags and seeds, so rerunning a command reproduces files byte for
//! byte. Wall-clock timings are printed to stdout only.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::CliError;
use netalloc::netmodel::ScenarioConfig;
use netalloc::solvers::GaConfig;

/// Full scenario echo carried by every report.
#[derive(Serialize)]
pub struct ScenarioEcho {
    pub num_cells: usize,
    pub subbands: usize,
    pub users_per_cell: usize,
    pub cell_radius: f64,
    pub max_power: f64,
    pub power_levels: Vec<f64>,
    pub subband_bandwidth: f64,
    pub noise_density: f64,
    pub target_ber: f64,
    pub shadowing_sigma: f64,
    pub bits_per_field: u32,
    pub bs_layout: String,
    pub rng_seed: u64,
    pub fingerprint: String,
}

impl ScenarioEcho {
    pub fn new(cfg: &ScenarioConfig) -> Self {
        ScenarioEcho {
            num_cells: cfg.num_cells,
            subbands: cfg.subbands,
            users_per_cell: cfg.users_per_cell,
            cell_radius: cfg.cell_radius,
            max_power: cfg.max_power,
            power_levels: cfg.power_levels.clone(),
            subband_bandwidth: cfg.subband_bandwidth,
            noise_density: cfg.noise_density,
            target_ber: cfg.target_ber,
            shadowing_sigma: cfg.shadowing_sigma,
            bits_per_field: cfg.bits_per_field,
            bs_layout: cfg.bs_layout.to_string(),
            rng_seed: cfg.rng_seed,
            fingerprint: cfg.fingerprint(),
        }
    }
}

#[derive(Serialize)]
pub struct GaEcho {
    pub population_size: usize,
    pub mutation_prob: f64,
    pub elite_pairs: usize,
    pub convergence_eps: f64,
    pub patience_generations: usize,
    pub max_generations: usize,
    pub rng_seed: u64,
}

impl GaEcho {
    pub fn new(ga: &GaConfig) -> Self {
        GaEcho {
            population_size: ga.population_size,
            mutation_prob: ga.mutation_prob,
            elite_pairs: ga.elite_pairs,
            convergence_eps: ga.convergence_eps,
            patience_generations: ga.patience_generations,
            max_generations: ga.max_generations,
            rng_seed: ga.rng_seed,
        }
    }
}

/// Writes a pretty JSON document with a trailing newline.
pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::DataFormat(format!("cannot serialize report: {e}")))?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

/// Path of the JSON summary companion of a CSV report.
pub fn json_sibling(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("json")
}

/// Summary statistics over a sequence, serialized into reports.
#[derive(Serialize, Clone, Copy)]
pub struct Stats {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

impl Stats {
    pub fn over(values: impl Iterator<Item = f64> + Clone) -> Stats {
        let mut count = 0usize;
        let mut sum = 0.0;
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for v in values {
            count += 1;
            sum += v;
            min = min.min(v);
            max = max.max(v);
        }
        if count == 0 {
            return Stats {
                mean: 0.0,
                min: 0.0,
                max: 0.0,
            };
        }
        Stats {
            mean: sum / count as f64,
            min,
            max,
        }
    }
}
