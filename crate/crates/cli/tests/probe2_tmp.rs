//! Data-signal probe. Temporary.
use netalloc::dataset::{generate, EncodingDims};
use netalloc::netmodel::{BsLayout, ScenarioConfig};
use netalloc::solvers::{GaConfig, SolveMethod};

fn desk_cfg() -> ScenarioConfig {
    ScenarioConfig {
        num_cells: 3,
        subbands: 2,
        users_per_cell: 3,
        cell_radius: 500.0,
        max_power: 40.0,
        power_levels: vec![6.4, 12.8],
        subband_bandwidth: 2.88e6,
        noise_density: -174.0,
        target_ber: 1e-6,
        shadowing_sigma: 8.0,
        bits_per_field: 2,
        bs_layout: BsLayout::Linear,
        rng_seed: 0,
        cqi_mapping: Default::default(),
    }
}

#[test]
fn probe_signal() {
    let cfg = desk_cfg();
    let ds = generate(&cfg, &GaConfig::default(), 2000, 0, SolveMethod::Ga).unwrap();
    let dims = EncodingDims::from_scenario(&cfg);
    let n = dims.bits_per_field as usize;

    // CQI histogram over the scaled inputs (first F slots per user).
    let mut hist = [0usize; 16];
    let mut edge = 0usize;
    let mut total_cqi = 0usize;
    for s in &ds.samples {
        for cell in 0..3 {
            for user in 0..3 {
                let base = (cell * 3 + user) * 3;
                for f in 0..2 {
                    let q = (s.input[base + f] * 15.0).round() as usize;
                    hist[q] += 1;
                    total_cqi += 1;
                }
                edge += s.input[base + 2] as usize;
            }
        }
    }
    println!("CQI histogram (fraction): ");
    for (q, c) in hist.iter().enumerate() {
        if *c > 0 {
            println!("  {q:2}: {:.3}", *c as f64 / total_cqi as f64);
        }
    }
    println!("edge fraction: {:.3}", edge as f64 / (ds.samples.len() * 9) as f64);

    // Decode target fields.
    let field = |bits: &[u8], idx: usize| -> usize {
        // field idx within sample: per (k,f): [power, assign]
        let group = idx / 2;
        let which = idx % 2;
        let base = group * 4 * n + which * 2 * n;
        let mut v = 0usize;
        for i in 0..n {
            v = (v << 1) | bits[base + i] as usize;
        }
        v
    };

    let slots = 6usize; // K*F
    let mut power_hist = [0usize; 2];
    let mut assign_hist = [0usize; 3];
    let mut argmax_cqi_right = 0usize;
    for s in &ds.samples {
        for slot in 0..slots {
            let (cell, sub) = (slot / 2, slot % 2);
            let p = field(&s.target_bits, slot * 2);
            let a = field(&s.target_bits, slot * 2 + 1);
            power_hist[p] += 1;
            assign_hist[a] += 1;
            // argmax-CQI heuristic for the assignment
            let mut best_u = 0;
            let mut best_q = -1.0;
            for u in 0..3 {
                let q = s.input[(cell * 3 + u) * 3 + sub];
                if q > best_q {
                    best_q = q;
                    best_u = u;
                }
            }
            if best_u == a {
                argmax_cqi_right += 1;
            }
        }
    }
    let denom = (ds.samples.len() * slots) as f64;
    println!(
        "power field balance: L0 {:.3} L1 {:.3}",
        power_hist[0] as f64 / denom,
        power_hist[1] as f64 / denom
    );
    println!(
        "assign field balance: {:.3} {:.3} {:.3}",
        assign_hist[0] as f64 / denom,
        assign_hist[1] as f64 / denom,
        assign_hist[2] as f64 / denom
    );
    println!(
        "argmax-CQI assignment accuracy: {:.4}",
        argmax_cqi_right as f64 / denom
    );
    // Chance (uniform net decodes all-zero): power acc = P(p=0), assign acc = P(a=0)
    println!(
        "uniform-net field acc = {:.4}",
        (power_hist[0] + assign_hist[0]) as f64 / (2.0 * denom)
    );
}
