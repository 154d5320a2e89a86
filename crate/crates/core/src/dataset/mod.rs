//! Solver-labeled datasets: generation pipeline, train/test splitting, and
//! CSV persistence.

mod encode;
mod io;

pub use encode::{
    decode_output, encode_input, encode_output, DecodedAllocation, EncodeError, EncodingDims,
};
pub use io::{read_csv, write_csv, DataError};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::netmodel::{sample_realization, ScenarioConfig};
use crate::par;
use crate::solvers::{exhaustive_search, ga_solve, GaConfig, SolveMethod, SolverError};

/// One encoded training example with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    /// Flattened CQI + location features, length K*U*(F+1).
    pub input: Vec<f64>,
    /// Target allocation bits, length 2*2*n*K*F.
    pub target_bits: Vec<u8>,
    /// Seed of the realization this sample was solved on.
    pub seed: u64,
    /// Solver that produced the label.
    pub method: SolveMethod,
    /// Utility of the labeled allocation.
    pub utility: f64,
}

/// Schema line persisted with every dataset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetSchema {
    pub schema_version: u32,
    pub cells: usize,
    pub users_per_cell: usize,
    pub subbands: usize,
    pub bits_per_field: u32,
    pub scenario_fingerprint: String,
}

impl DatasetSchema {
    pub fn from_scenario(cfg: &ScenarioConfig) -> Self {
        DatasetSchema {
            schema_version: 1,
            cells: cfg.num_cells,
            users_per_cell: cfg.users_per_cell,
            subbands: cfg.subbands,
            bits_per_field: cfg.bits_per_field,
            scenario_fingerprint: cfg.fingerprint(),
        }
    }

    pub fn input_len(&self) -> usize {
        self.cells * self.users_per_cell * (self.subbands + 1)
    }

    pub fn output_len(&self) -> usize {
        2 * 2 * self.bits_per_field as usize * self.cells * self.subbands
    }
}

/// An ordered collection of samples sharing one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub schema: DatasetSchema,
    pub samples: Vec<Sample>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Mean labeled utility across samples.
    pub fn mean_utility(&self) -> f64 {
        if self.samples.is_empty() {
            return 0.0;
        }
        self.samples.iter().map(|s| s.utility).sum::<f64>() / self.samples.len() as f64
    }
}

/// Runs the generation pipeline: for each index `i`, draw a realization from
/// `seed ^ i` (which fixes the CQI reports and edge indicators), solve the
/// power allocation with the chosen method, apply the greedy assignment, and
/// encode the (input, target) pair.
///
/// Samples are independent, so generation is data-parallel across indices;
/// output order is by index regardless of scheduling.
pub fn generate(
    cfg: &ScenarioConfig,
    ga: &GaConfig,
    count: usize,
    seed: u64,
    method: SolveMethod,
) -> Result<Dataset, SolverError> {
    // Surface an oversized exhaustive space before spawning any work.
    if method == SolveMethod::Exhaustive {
        let probe = sample_realization(cfg, seed);
        exhaustive_search(&probe, cfg)?;
    }
    let dims = EncodingDims::from_scenario(cfg);
    let samples = par::map_indexed(count, |i| {
        let sample_seed = seed ^ i as u64;
        let real = sample_realization(cfg, sample_seed);
        let result = match method {
            SolveMethod::Exhaustive => {
                exhaustive_search(&real, cfg).expect("cap was checked up front")
            }
            SolveMethod::Ga => {
                let per_sample = GaConfig {
                    rng_seed: ga.rng_seed ^ sample_seed,
                    ..ga.clone()
                };
                ga_solve(&real, cfg, &per_sample)
            }
        };
        let input = encode_input(&real, cfg);
        let target_bits = encode_output(&result.allocation, &dims)
            .expect("scenario validation guarantees fields fit in n bits");
        Sample {
            input,
            target_bits,
            seed: sample_seed,
            method,
            utility: result.allocation.utility,
        }
    });
    Ok(Dataset {
        schema: DatasetSchema::from_scenario(cfg),
        samples,
    })
}

/// Seeded shuffle followed by a prefix/suffix split; the two parts are
/// disjoint and exhaustive, with `floor(fraction * len)` samples in the
/// first.
pub fn split(ds: &Dataset, train_fraction: f64, seed: u64) -> (Dataset, Dataset) {
    assert!(
        train_fraction > 0.0 && train_fraction < 1.0,
        "train_fraction must lie strictly between 0 and 1"
    );
    let mut indices: Vec<usize> = (0..ds.samples.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    indices.shuffle(&mut rng);
    let train_len = (train_fraction * ds.samples.len() as f64).floor() as usize;
    let take = |idx: &[usize]| Dataset {
        schema: ds.schema.clone(),
        samples: idx.iter().map(|&i| ds.samples[i].clone()).collect(),
    };
    (take(&indices[..train_len]), take(&indices[train_len..]))
}
