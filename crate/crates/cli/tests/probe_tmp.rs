//! Calibration probe for acceptance-criteria hyperparameters. Temporary.
use std::time::Instant;

use ndarray::Array2;
use netalloc::dataset::{generate, split, Dataset, EncodingDims};
use netalloc::dnn::*;
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

fn to_matrices(ds: &Dataset) -> (Array2<f64>, Array2<f64>) {
    let m = ds.samples.len();
    let mut x = Array2::zeros((m, ds.schema.input_len()));
    let mut t = Array2::zeros((m, ds.schema.output_len()));
    for (r, s) in ds.samples.iter().enumerate() {
        for (c, v) in s.input.iter().enumerate() {
            x[[r, c]] = *v;
        }
        for (c, b) in s.target_bits.iter().enumerate() {
            t[[r, c]] = *b as f64;
        }
    }
    (x, t)
}

fn dims() -> EncodingDims {
    EncodingDims {
        cells: 3,
        users_per_cell: 3,
        subbands: 2,
        bits_per_field: 2,
        power_levels: 2,
    }
}

#[test]
fn probe_training() {
    let cfg = desk_cfg();
    let t0 = Instant::now();
    let ds = generate(&cfg, &GaConfig::default(), 5000, 0, SolveMethod::Ga).unwrap();
    println!("generate 5000: {:.1}s", t0.elapsed().as_secs_f64());
    let (train, test) = split(&ds, 0.8, 7);
    let d = dims();

    let uni = uniform_output_net(
        train.schema.input_len(),
        train.schema.output_len(),
        train.schema.scenario_fingerprint.clone(),
    );
    let chance = evaluate(&uni, &test, &d).unwrap();
    println!("chance field acc: {:.4}", chance.field_accuracy);

    let (tx, tt) = to_matrices(&train);

    for (name, hidden, tc) in [
        (
            "h[21,17] lr0.5 e150",
            vec![21usize, 17],
            TrainConfig {
                learning_rate: 0.5,
                max_epochs: 150,
                error_threshold: 0.0,
                ..TrainConfig::default()
            },
        ),
        (
            "h[21,17] lr1.0 e300",
            vec![21, 17],
            TrainConfig {
                learning_rate: 1.0,
                max_epochs: 300,
                error_threshold: 0.0,
                ..TrainConfig::default()
            },
        ),
    ] {
        let t1 = Instant::now();
        let encoders = pretrain_stack(
            &tx,
            &hidden,
            &TrainConfig {
                max_epochs: 100,
                ..tc.clone()
            },
        )
        .unwrap();
        let mut codes = tx.clone();
        for e in &encoders {
            codes = e.forward_batch(&codes).unwrap();
        }
        let head = train_softmax(
            &codes,
            &tt,
            &TrainConfig {
                max_epochs: 100,
                ..tc.clone()
            },
        )
        .unwrap();
        let stacked = NetParams::from_stack(
            encoders,
            head,
            train.schema.scenario_fingerprint.clone(),
        )
        .unwrap();
        let (net, report) = fine_tune(&stacked, &tx, &tt, &tc).unwrap();
        let m_test = evaluate(&net, &test, &d).unwrap();
        let m_train = evaluate(&net, &train, &d).unwrap();
        println!(
            "{name}: train {:.4} test {:.4} (epochs {} best {}) {:.1}s",
            m_train.field_accuracy,
            m_test.field_accuracy,
            report.train_losses.len() - 1,
            report.best_epoch,
            t1.elapsed().as_secs_f64()
        );
    }
}
