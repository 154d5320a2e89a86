//! `netalloc generate`: run the data-generation pipeline and persist the
//! dataset CSV.

use std::path::Path;

use crate::{CliError, MethodArg};
use netalloc::dataset::{generate, write_csv};
use netalloc::netmodel::ScenarioConfig;
use netalloc::solvers::{GaConfig, SolveMethod};

pub fn run(
    config: &Path,
    samples: usize,
    seed: Option<u64>,
    method: MethodArg,
    out: &Path,
) -> Result<(), CliError> {
    if samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    let cfg = ScenarioConfig::from_file(config)?;
    let seed = seed.unwrap_or(cfg.rng_seed);
    let method = match method {
        MethodArg::Ga => SolveMethod::Ga,
        MethodArg::Exhaustive => SolveMethod::Exhaustive,
    };
    let started = std::time::Instant::now();
    let ds = generate(&cfg, &GaConfig::default(), samples, seed, method)?;
    write_csv(&ds, out)?;
    println!(
        "generated {} samples (method={method}, seed={seed}) mean_utility={} -> {} [{:.2}s]",
        ds.len(),
        ds.mean_utility(),
        out.display(),
        started.elapsed().as_secs_f64()
    );
    Ok(())
}
