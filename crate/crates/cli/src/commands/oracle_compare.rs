//! `netalloc oracle-compare`: solve identical realizations with the
//! exhaustive oracle and the GA, and report optimality rate and search cost.
//!
//! The CSV and JSON reports contain only seed-determined numbers; wall-clock
//! statistics go to stdout.

use std::path::Path;

use serde::Serialize;

use crate::report::{json_sibling, write_json, GaEcho, ScenarioEcho, Stats};
use crate::CliError;
use netalloc::netmodel::{sample_realization, ScenarioConfig};
use netalloc::par;
use netalloc::solvers::{exhaustive_search, ga_solve, GaConfig, SolverError};

/// Relative utility gap under which a GA solution counts as optimal.
pub const OPTIMALITY_REL_TOL: f64 = 1e-9;

struct PairedRun {
    seed: u64,
    exhaustive_utility: f64,
    ga_utility: f64,
    optimal: bool,
    exhaustive_evals: u64,
    ga_evals: u64,
    exhaustive_secs: f64,
    ga_secs: f64,
}

#[derive(Serialize)]
struct OracleCompareSummary {
    scenario: ScenarioEcho,
    ga_config: GaEcho,
    base_seed: u64,
    samples: usize,
    optimality_rate: f64,
    ga_always_within_oracle: bool,
    exhaustive_utility: Stats,
    ga_utility: Stats,
    exhaustive_evals: Stats,
    ga_evals: Stats,
    ga_evals_always_below_exhaustive: bool,
}

pub fn run(config: &Path, samples: usize, seed: Option<u64>, out: &Path) -> Result<(), CliError> {
    if samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    let cfg = ScenarioConfig::from_file(config)?;
    let base_seed = seed.unwrap_or(cfg.rng_seed);
    let ga_cfg = GaConfig::default();

    // Surface a refused search space before spawning the pool.
    exhaustive_search(&sample_realization(&cfg, base_seed), &cfg)?;

    let runs: Vec<Result<PairedRun, SolverError>> = par::map_indexed(samples, |i| {
        let sample_seed = base_seed ^ i as u64;
        let real = sample_realization(&cfg, sample_seed);
        let exact = exhaustive_search(&real, &cfg)?;
        let ga = ga_solve(
            &real,
            &cfg,
            &GaConfig {
                rng_seed: ga_cfg.rng_seed ^ sample_seed,
                ..ga_cfg.clone()
            },
        );
        let rel_gap = (exact.allocation.utility - ga.allocation.utility).abs()
            / exact.allocation.utility.abs().max(f64::MIN_POSITIVE);
        Ok(PairedRun {
            seed: sample_seed,
            exhaustive_utility: exact.allocation.utility,
            ga_utility: ga.allocation.utility,
            optimal: rel_gap <= OPTIMALITY_REL_TOL,
            exhaustive_evals: exact.fitness_evals,
            ga_evals: ga.fitness_evals,
            exhaustive_secs: exact.wall_time,
            ga_secs: ga.wall_time,
        })
    });
    let runs: Vec<PairedRun> = runs.into_iter().collect::<Result<_, _>>()?;

    let mut csv = String::from(
        "index,seed,exhaustive_utility,ga_utility,optimal,exhaustive_evals,ga_evals\n",
    );
    for (i, r) in runs.iter().enumerate() {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            i,
            r.seed,
            r.exhaustive_utility,
            r.ga_utility,
            u8::from(r.optimal),
            r.exhaustive_evals,
            r.ga_evals
        ));
    }
    std::fs::write(out, csv)?;

    let optimality_rate =
        runs.iter().filter(|r| r.optimal).count() as f64 / runs.len() as f64;
    let summary = OracleCompareSummary {
        scenario: ScenarioEcho::new(&cfg),
        ga_config: GaEcho::new(&ga_cfg),
        base_seed,
        samples,
        optimality_rate,
        ga_always_within_oracle: runs
            .iter()
            .all(|r| r.ga_utility <= r.exhaustive_utility * (1.0 + OPTIMALITY_REL_TOL)),
        exhaustive_utility: Stats::over(runs.iter().map(|r| r.exhaustive_utility)),
        ga_utility: Stats::over(runs.iter().map(|r| r.ga_utility)),
        exhaustive_evals: Stats::over(runs.iter().map(|r| r.exhaustive_evals as f64)),
        ga_evals: Stats::over(runs.iter().map(|r| r.ga_evals as f64)),
        ga_evals_always_below_exhaustive: runs.iter().all(|r| r.ga_evals < r.exhaustive_evals),
    };
    write_json(&summary, &json_sibling(out))?;

    let wall_ex = Stats::over(runs.iter().map(|r| r.exhaustive_secs));
    let wall_ga = Stats::over(runs.iter().map(|r| r.ga_secs));
    println!(
        "oracle-compare over {} runs: GA optimal {:.2}% | evals exhaustive {:.0} vs GA mean {:.1}",
        runs.len(),
        100.0 * optimality_rate,
        summary.exhaustive_evals.mean,
        summary.ga_evals.mean,
    );
    println!(
        "wall time (not persisted): exhaustive mean/min/max {:.4}/{:.4}/{:.4}s, ga {:.4}/{:.4}/{:.4}s",
        wall_ex.mean, wall_ex.min, wall_ex.max, wall_ga.mean, wall_ga.min, wall_ga.max
    );
    println!(
        "reports -> {} and {}",
        out.display(),
        json_sibling(out).display()
    );
    Ok(())
}
