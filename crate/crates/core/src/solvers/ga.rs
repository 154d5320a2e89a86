//! Genetic algorithm over per-cell power vectors.
//!
//! A chromosome concatenates the K per-cell power vectors; each gene is one
//! power-level index. Selection samples parent pairs fitness-proportionally
//! from the elite, crossover is single-point at a uniform cut, mutation is
//! per-gene with feasibility repair, and an offspring joins the population
//! (replacing the current worst) only when it beats both parents. Repeat
//! chromosomes are served from a cache, so `fitness_evals` counts distinct
//! utility evaluations.

use std::collections::HashMap;
use std::time::Instant;

use ndarray::Array2;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::netmodel::{feasible_power_vectors, NetworkRealization, ScenarioConfig};
use crate::par;

use super::{complete_allocation, fitness_of_watts, SolveMethod, SolveResult};

/// Genetic-algorithm hyperparameters.
#[derive(Debug, Clone)]
pub struct GaConfig {
    pub population_size: usize,
    /// Per-gene mutation probability.
    pub mutation_prob: f64,
    /// Number of parent pairs drawn per generation; the elite pool holds
    /// twice this many individuals.
    pub elite_pairs: usize,
    /// Relative best-fitness improvement below which a generation counts as
    /// stalled.
    pub convergence_eps: f64,
    /// Consecutive stalled generations before termination.
    pub patience_generations: usize,
    pub max_generations: usize,
    pub rng_seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population_size: 50,
            mutation_prob: 0.05,
            elite_pairs: 5,
            convergence_eps: 1e-6,
            patience_generations: 10,
            max_generations: 500,
            rng_seed: 42,
        }
    }
}

impl GaConfig {
    fn assert_valid(&self) {
        assert!(self.population_size >= 2, "population_size must be >= 2");
        assert!(self.elite_pairs >= 1, "elite_pairs must be >= 1");
        assert!(
            self.population_size >= 2 * self.elite_pairs,
            "population_size must be >= 2 * elite_pairs"
        );
        assert!(
            (0.0..=1.0).contains(&self.mutation_prob),
            "mutation_prob must lie in [0, 1]"
        );
        assert!(self.convergence_eps >= 0.0);
        assert!(self.patience_generations >= 1);
        assert!(self.max_generations >= 1);
    }
}

/// Per-generation diagnostics.
#[derive(Debug, Clone)]
pub struct GaTrace {
    /// Best-ever fitness after initialization and after each generation.
    pub best_per_generation: Vec<f64>,
    pub generations: usize,
}

#[derive(Debug, Clone)]
struct Individual {
    genes: Vec<usize>,
    fitness: f64,
}

/// Solves one instance with the GA; deterministic in `(real, cfg, ga)`.
pub fn ga_solve(
    real: &NetworkRealization,
    cfg: &ScenarioConfig,
    ga: &GaConfig,
) -> SolveResult {
    ga_solve_traced(real, cfg, ga).0
}

/// `ga_solve` that also returns per-generation diagnostics.
pub fn ga_solve_traced(
    real: &NetworkRealization,
    cfg: &ScenarioConfig,
    ga: &GaConfig,
) -> (SolveResult, GaTrace) {
    ga.assert_valid();
    let start = Instant::now();
    let mut engine = GaEngine::new(real, cfg, ga);

    let mut trace = GaTrace {
        best_per_generation: vec![engine.best.fitness],
        generations: 0,
    };
    let mut stall = 0usize;
    while trace.generations < ga.max_generations {
        let prev_best = engine.best.fitness;
        engine.step();
        trace.generations += 1;
        trace.best_per_generation.push(engine.best.fitness);

        let improvement =
            (engine.best.fitness - prev_best) / prev_best.abs().max(f64::MIN_POSITIVE);
        if improvement < ga.convergence_eps {
            stall += 1;
            if stall >= ga.patience_generations {
                break;
            }
        } else {
            stall = 0;
        }
    }

    let allocation = complete_allocation(real, engine.best_power_matrix(), cfg);
    let result = SolveResult {
        allocation,
        fitness_evals: engine.evals,
        wall_time: start.elapsed().as_secs_f64(),
        method: SolveMethod::Ga,
    };
    (result, trace)
}

struct GaEngine<'a> {
    real: &'a NetworkRealization,
    cfg: &'a ScenarioConfig,
    ga: &'a GaConfig,
    rng: ChaCha8Rng,
    population: Vec<Individual>,
    best: Individual,
    cache: HashMap<Vec<usize>, f64>,
    evals: u64,
}

impl<'a> GaEngine<'a> {
    fn new(real: &'a NetworkRealization, cfg: &'a ScenarioConfig, ga: &'a GaConfig) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(ga.rng_seed);
        let feasible = feasible_power_vectors(cfg);

        // Initial population: every cell draws uniformly from the feasible
        // set, so every chromosome satisfies the per-cell budget.
        let mut chromosomes = Vec::with_capacity(ga.population_size);
        for _ in 0..ga.population_size {
            let mut genes = Vec::with_capacity(cfg.num_cells * cfg.subbands);
            for _ in 0..cfg.num_cells {
                let pick = rng.random_range(0..feasible.len());
                genes.extend_from_slice(&feasible[pick]);
            }
            chromosomes.push(genes);
        }

        let mut engine = GaEngine {
            real,
            cfg,
            ga,
            rng,
            population: Vec::new(),
            best: Individual {
                genes: Vec::new(),
                fitness: f64::NEG_INFINITY,
            },
            cache: HashMap::new(),
            evals: 0,
        };
        let fitnesses = engine.evaluate_batch(&chromosomes);
        engine.population = chromosomes
            .into_iter()
            .zip(fitnesses)
            .map(|(genes, fitness)| Individual { genes, fitness })
            .collect();
        engine.best = engine
            .population
            .iter()
            .fold(None::<&Individual>, |acc, ind| match acc {
                Some(best) if best.fitness >= ind.fitness => Some(best),
                _ => Some(ind),
            })
            .expect("population is non-empty")
            .clone();
        engine
    }

    /// Fitness for a batch of chromosomes. Uncached distinct chromosomes are
    /// evaluated in parallel; randomness is never consumed here.
    fn evaluate_batch(&mut self, chromosomes: &[Vec<usize>]) -> Vec<f64> {
        let mut pending: Vec<Vec<usize>> = Vec::new();
        for genes in chromosomes {
            if !self.cache.contains_key(genes) && !pending.contains(genes) {
                pending.push(genes.clone());
            }
        }
        if !pending.is_empty() {
            let real = self.real;
            let cfg = self.cfg;
            let results = par::map_slice(&pending, |genes| {
                let powers_w = power_matrix(genes, cfg).map(|&idx| cfg.power_levels[idx]);
                fitness_of_watts(real, &powers_w, cfg)
            });
            self.evals += pending.len() as u64;
            for (genes, fit) in pending.into_iter().zip(results) {
                self.cache.insert(genes, fit);
            }
        }
        chromosomes.iter().map(|g| self.cache[g]).collect()
    }

    /// Runs one generation: selection, crossover, mutation with repair,
    /// admission of improving offspring.
    fn step(&mut self) {
        let gene_count = self.cfg.num_cells * self.cfg.subbands;

        // Elite pool: the top individuals by fitness, stable on ties.
        let mut order: Vec<usize> = (0..self.population.len()).collect();
        order.sort_by(|&a, &b| {
            self.population[b]
                .fitness
                .total_cmp(&self.population[a].fitness)
        });
        let elite: Vec<usize> = order
            .into_iter()
            .take(2 * self.ga.elite_pairs)
            .collect();

        // Draw parent pairs and build offspring; all randomness happens here,
        // before any fitness evaluation.
        let mut offspring: Vec<(Vec<usize>, f64, f64)> = Vec::new();
        for _ in 0..self.ga.elite_pairs {
            let a = self.roulette(&elite, None);
            let b = self.roulette(&elite, Some(a));
            let pa = &self.population[a];
            let pb = &self.population[b];

            let (mut child1, mut child2) = if gene_count >= 2 {
                let cut = self.rng.random_range(1..gene_count);
                let mut c1 = pa.genes[..cut].to_vec();
                c1.extend_from_slice(&pb.genes[cut..]);
                let mut c2 = pb.genes[..cut].to_vec();
                c2.extend_from_slice(&pa.genes[cut..]);
                (c1, c2)
            } else {
                (pa.genes.clone(), pb.genes.clone())
            };

            let (pa_fit, pb_fit) = (pa.fitness, pb.fitness);
            self.mutate_and_repair(&mut child1);
            self.mutate_and_repair(&mut child2);
            offspring.push((child1, pa_fit, pb_fit));
            offspring.push((child2, pa_fit, pb_fit));
        }

        let chromosomes: Vec<Vec<usize>> = offspring.iter().map(|(g, _, _)| g.clone()).collect();
        let fitnesses = self.evaluate_batch(&chromosomes);

        for ((genes, pa_fit, pb_fit), fitness) in offspring.into_iter().zip(fitnesses) {
            debug_assert!(row_sums_feasible(&genes, self.cfg));
            // Admission: strictly better than both parents; the newcomer
            // replaces the current worst individual.
            if fitness > pa_fit && fitness > pb_fit {
                let worst = self
                    .population
                    .iter()
                    .enumerate()
                    .fold(0usize, |w, (i, ind)| {
                        if ind.fitness < self.population[w].fitness {
                            i
                        } else {
                            w
                        }
                    });
                self.population[worst] = Individual { genes, fitness };
                if fitness > self.best.fitness {
                    self.best = self.population[worst].clone();
                }
            }
        }
    }

    /// Fitness-proportional draw from the elite pool, optionally excluding
    /// one member (so a pair never reuses the same individual unless the
    /// pool has a single member).
    fn roulette(&mut self, elite: &[usize], exclude: Option<usize>) -> usize {
        let candidates: Vec<usize> = elite
            .iter()
            .copied()
            .filter(|&i| Some(i) != exclude)
            .collect();
        let candidates = if candidates.is_empty() {
            elite.to_vec()
        } else {
            candidates
        };
        let total: f64 = candidates
            .iter()
            .map(|&i| self.population[i].fitness)
            .sum();
        if total <= 0.0 {
            return candidates[self.rng.random_range(0..candidates.len())];
        }
        let mut ticket = self.rng.random::<f64>() * total;
        for &i in &candidates {
            ticket -= self.population[i].fitness;
            if ticket <= 0.0 {
                return i;
            }
        }
        *candidates.last().expect("candidates non-empty")
    }

    /// Per-gene mutation to a uniformly random level, then per-cell
    /// feasibility repair: mutated genes are re-drawn among levels that keep
    /// the cell within budget; if no redraw can fix the row, the largest
    /// gene is downgraded until it fits. Crossover can also mix two feasible
    /// rows into an infeasible one, which the downgrade path repairs.
    fn mutate_and_repair(&mut self, genes: &mut [usize]) {
        let levels = self.cfg.num_levels();
        let f = self.cfg.subbands;
        let mut mutated: Vec<usize> = Vec::new();
        for g in 0..genes.len() {
            if self.rng.random::<f64>() < self.ga.mutation_prob {
                genes[g] = self.rng.random_range(0..levels);
                mutated.push(g);
            }
        }
        for cell in 0..self.cfg.num_cells {
            let row = cell * f..(cell + 1) * f;
            let mut to_redraw: Vec<usize> =
                mutated.iter().copied().filter(|g| row.contains(g)).collect();
            loop {
                let total: f64 = genes[row.clone()]
                    .iter()
                    .map(|&idx| self.cfg.power_levels[idx])
                    .sum();
                if total <= self.cfg.max_power + 1e-12 {
                    break;
                }
                if let Some(pos) = to_redraw.first().copied() {
                    to_redraw.remove(0);
                    let others = total - self.cfg.power_levels[genes[pos]];
                    let options: Vec<usize> = (0..levels)
                        .filter(|&l| others + self.cfg.power_levels[l] <= self.cfg.max_power + 1e-12)
                        .collect();
                    if !options.is_empty() {
                        genes[pos] = options[self.rng.random_range(0..options.len())];
                    }
                } else {
                    // Downgrade the largest gene in the row (first occurrence).
                    let offset = genes[row.clone()]
                        .iter()
                        .enumerate()
                        .fold(0usize, |m, (i, &l)| {
                            if l > genes[row.start + m] {
                                i
                            } else {
                                m
                            }
                        });
                    debug_assert!(genes[row.start + offset] > 0);
                    genes[row.start + offset] -= 1;
                }
            }
        }
    }

    fn best_power_matrix(&self) -> Array2<usize> {
        power_matrix(&self.best.genes, self.cfg)
    }
}

fn power_matrix(genes: &[usize], cfg: &ScenarioConfig) -> Array2<usize> {
    Array2::from_shape_fn((cfg.num_cells, cfg.subbands), |(k, f)| {
        genes[k * cfg.subbands + f]
    })
}

fn row_sums_feasible(genes: &[usize], cfg: &ScenarioConfig) -> bool {
    genes.chunks(cfg.subbands).all(|row| {
        row.iter().map(|&idx| cfg.power_levels[idx]).sum::<f64>() <= cfg.max_power + 1e-12
    })
}
