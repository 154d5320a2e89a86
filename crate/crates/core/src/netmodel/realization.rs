//! Random channel realizations: BS/user geometry, link gains, CQI reports,
//! and the SINR arithmetic shared by every solver.

use ndarray::{Array2, Array3};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Normal};

use super::allocation::feasible_power_vectors;
use super::scenario::{BsLayout, ScenarioConfig};
use super::{cqi_quantize, location_indicator};

/// One random drop of the network: geometry, per-link gains, and the derived
/// channel reports. Global user indices are cell-major: user `u` of cell `k`
/// has global index `k * users_per_cell + u`.
#[derive(Debug, Clone)]
pub struct NetworkRealization {
    /// Base-station positions in meters.
    pub bs_positions: Vec<(f64, f64)>,
    /// User positions in meters, indexed by global user.
    pub user_positions: Vec<(f64, f64)>,
    /// Linear link gain `[user, cell, subband]`.
    pub link_gain: Array3<f64>,
    /// Serving-cell CQI report per `[user, subband]`, values in 0..=15.
    pub cqi: Array2<u8>,
    /// Cell-edge indicator per global user.
    pub location_indicator: Vec<u8>,
    /// Serving cell per global user (the geometric parent cell).
    pub association: Vec<usize>,
    /// Random reference power-level indices `[cell, subband]` the CQI
    /// reports were measured under.
    pub reference_power_idx: Array2<usize>,
    /// Receiver noise power in watts over one sub-band.
    pub noise_power_w: f64,
    /// Seed this realization was drawn from.
    pub seed: u64,
}

impl NetworkRealization {
    /// Distance from a global user to a BS, in meters.
    pub fn distance(&self, user: usize, cell: usize) -> f64 {
        let (ux, uy) = self.user_positions[user];
        let (bx, by) = self.bs_positions[cell];
        ((ux - bx).powi(2) + (uy - by).powi(2)).sqrt()
    }

    /// Reference powers in watts, resolved against the scenario's levels.
    pub fn reference_powers_w(&self, cfg: &ScenarioConfig) -> Array2<f64> {
        self.reference_power_idx
            .map(|&idx| cfg.power_levels[idx])
    }
}

/// Knobs for deterministic test setups.
#[derive(Debug, Clone, Copy, Default)]
pub struct RealizationOptions {
    /// Replace every Rayleigh fading draw with unit gain, leaving only path
    /// loss and shadowing. Test hook.
    pub force_unit_fading: bool,
}

/// BS coordinates for a layout, inter-site distance `radius`.
fn bs_positions(layout: BsLayout, num_cells: usize, radius: f64) -> Vec<(f64, f64)> {
    match layout {
        BsLayout::Linear => (0..num_cells).map(|k| (k as f64 * radius, 0.0)).collect(),
        BsLayout::Hex => hex_spiral(num_cells)
            .into_iter()
            .map(|(q, r)| {
                let x = radius * (q as f64 + r as f64 / 2.0);
                let y = radius * (3f64.sqrt() / 2.0) * r as f64;
                (x, y)
            })
            .collect(),
    }
}

/// First `n` axial coordinates of a hexagonal spiral around the origin.
fn hex_spiral(n: usize) -> Vec<(i64, i64)> {
    const DIRS: [(i64, i64); 6] = [(1, 0), (1, -1), (0, -1), (-1, 0), (-1, 1), (0, 1)];
    let mut out = vec![(0, 0)];
    let mut ring = 1i64;
    while out.len() < n {
        // Walk the ring starting one step in direction 4 from the previous ring.
        let mut q = -ring;
        let mut r = ring;
        for dir in DIRS {
            for _ in 0..ring {
                if out.len() == n {
                    return out;
                }
                out.push((q, r));
                q += dir.0;
                r += dir.1;
            }
        }
        ring += 1;
    }
    out
}

/// Macro-cell path loss in dB at distance `d_m` meters, floored at 10 m.
fn path_loss_db(d_m: f64) -> f64 {
    let d = d_m.max(10.0);
    128.1 + 37.6 * (d / 1000.0).log10()
}

/// Draws one network realization, deterministic in `(cfg, seed)`.
///
/// RNG consumption order is fixed: user positions (cell-major), then
/// shadowing per (user, cell), then fading per (user, cell, subband), then
/// one reference power vector per cell.
pub fn sample_realization(cfg: &ScenarioConfig, seed: u64) -> NetworkRealization {
    sample_realization_with(cfg, seed, RealizationOptions::default())
}

/// `sample_realization` with test hooks.
pub fn sample_realization_with(
    cfg: &ScenarioConfig,
    seed: u64,
    opts: RealizationOptions,
) -> NetworkRealization {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = cfg.num_cells;
    let f = cfg.subbands;
    let u_total = cfg.total_users();

    let bs = bs_positions(cfg.bs_layout, k, cfg.cell_radius);

    // Users drawn uniformly over each cell's disk.
    let mut user_positions = Vec::with_capacity(u_total);
    let mut association = Vec::with_capacity(u_total);
    for cell in 0..k {
        for _ in 0..cfg.users_per_cell {
            let radial: f64 = rng.random::<f64>();
            let angle: f64 = rng.random::<f64>() * std::f64::consts::TAU;
            let dist = cfg.cell_radius * radial.sqrt();
            let (bx, by) = bs[cell];
            user_positions.push((bx + dist * angle.cos(), by + dist * angle.sin()));
            association.push(cell);
        }
    }

    // Large-scale shadowing per (user, cell), shared across sub-bands.
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    let mut shadow_db = Array2::<f64>::zeros((u_total, k));
    for user in 0..u_total {
        for cell in 0..k {
            shadow_db[[user, cell]] = cfg.shadowing_sigma * normal.sample(&mut rng);
        }
    }

    // Small-scale Rayleigh fading power per (user, cell, subband).
    let exp = Exp::new(1.0).expect("unit-rate exponential");
    let mut link_gain = Array3::<f64>::zeros((u_total, k, f));
    for user in 0..u_total {
        let (ux, uy) = user_positions[user];
        for cell in 0..k {
            let (bx, by) = bs[cell];
            let d = ((ux - bx).powi(2) + (uy - by).powi(2)).sqrt();
            let large_scale = 10f64.powf(-(path_loss_db(d) + shadow_db[[user, cell]]) / 10.0);
            for sub in 0..f {
                let h2 = if opts.force_unit_fading {
                    1.0
                } else {
                    exp.sample(&mut rng)
                };
                link_gain[[user, cell, sub]] = large_scale * h2;
            }
        }
    }

    // Reference power vectors the CQI reports are measured under: one random
    // feasible vector per cell.
    let feasible = feasible_power_vectors(cfg);
    let mut reference_power_idx = Array2::<usize>::zeros((k, f));
    for cell in 0..k {
        let pick = rng.random_range(0..feasible.len());
        for sub in 0..f {
            reference_power_idx[[cell, sub]] = feasible[pick][sub];
        }
    }

    let noise_power_w = cfg.noise_power_w();
    let reference_w = reference_power_idx.map(|&idx| cfg.power_levels[idx]);

    let mut real = NetworkRealization {
        bs_positions: bs,
        user_positions,
        link_gain,
        cqi: Array2::zeros((u_total, f)),
        location_indicator: vec![0; u_total],
        association,
        reference_power_idx,
        noise_power_w,
        seed,
    };

    for user in 0..u_total {
        let cell = real.association[user];
        real.location_indicator[user] =
            location_indicator(real.distance(user, cell), cfg.cell_radius);
        for sub in 0..f {
            let s = sinr(&real, &reference_w, user, cell, sub);
            real.cqi[[user, sub]] = cqi_quantize(10.0 * s.log10());
        }
    }
    real
}

/// SINR of `user` served by `cell` on `subband` under the given per-cell
/// power matrix in watts: serving power times gain over noise plus
/// co-channel interference from every other cell.
pub fn sinr(
    real: &NetworkRealization,
    powers_w: &Array2<f64>,
    user: usize,
    cell: usize,
    subband: usize,
) -> f64 {
    debug_assert_eq!(real.association[user], cell, "user must be served by cell");
    let signal = powers_w[[cell, subband]] * real.link_gain[[user, cell, subband]];
    let mut denom = real.noise_power_w;
    for other in 0..real.bs_positions.len() {
        if other != cell {
            denom += powers_w[[other, subband]] * real.link_gain[[user, other, subband]];
        }
    }
    signal / denom
}
