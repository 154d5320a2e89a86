//! `netalloc train`: stacked-autoencoder pretraining, softmax head, and
//! fine-tuning, with allocation-level metrics on both splits.

use std::path::Path;

use ndarray::Array2;
use serde::Serialize;

use super::{dims_from_dataset, load_dataset, parse_usize_list};
use crate::report::write_json;
use crate::CliError;
use netalloc::dataset::Dataset;
use netalloc::dnn::{
    evaluate, fine_tune, pretrain_stack, save_checkpoint, train_softmax, EvalMetrics,
    FineTuneReport, NetParams, TrainConfig,
};

pub struct PipelineOutput {
    pub net: NetParams,
    pub report: FineTuneReport,
    pub train_metrics: EvalMetrics,
    pub test_metrics: EvalMetrics,
}

/// Dataset rows as dense matrices: inputs and target bits.
pub fn to_matrices(ds: &Dataset) -> (Array2<f64>, Array2<f64>) {
    let m = ds.samples.len();
    let mut inputs = Array2::zeros((m, ds.schema.input_len()));
    let mut targets = Array2::zeros((m, ds.schema.output_len()));
    for (r, sample) in ds.samples.iter().enumerate() {
        for (c, v) in sample.input.iter().enumerate() {
            inputs[[r, c]] = *v;
        }
        for (c, b) in sample.target_bits.iter().enumerate() {
            targets[[r, c]] = *b as f64;
        }
    }
    (inputs, targets)
}

/// The full training pipeline shared by `train` and `sweep`.
pub fn train_pipeline(
    train: &Dataset,
    test: &Dataset,
    hidden: &[usize],
    tc: &TrainConfig,
) -> Result<PipelineOutput, CliError> {
    if train.schema.scenario_fingerprint != test.schema.scenario_fingerprint {
        return Err(CliError::DataFormat(format!(
            "train/test scenario fingerprints differ: {} vs {}",
            train.schema.scenario_fingerprint, test.schema.scenario_fingerprint
        )));
    }
    let (train_x, train_t) = to_matrices(train);
    let encoders = pretrain_stack(&train_x, hidden, tc)?;
    let mut codes = train_x.clone();
    for encoder in &encoders {
        codes = encoder.forward_batch(&codes)?;
    }
    let head = train_softmax(&codes, &train_t, tc)?;
    let stacked = NetParams::from_stack(
        encoders,
        head,
        train.schema.scenario_fingerprint.clone(),
    )?;
    let (net, report) = fine_tune(&stacked, &train_x, &train_t, tc)?;

    let dims = dims_from_dataset(train);
    let train_metrics = evaluate(&net, train, &dims)?;
    let test_metrics = evaluate(&net, test, &dims)?;
    Ok(PipelineOutput {
        net,
        report,
        train_metrics,
        test_metrics,
    })
}

#[derive(Serialize)]
struct MetricsEcho {
    samples: usize,
    field_accuracy: f64,
    exact_match_rate: f64,
    bit_accuracy: f64,
}

impl From<EvalMetrics> for MetricsEcho {
    fn from(m: EvalMetrics) -> Self {
        MetricsEcho {
            samples: m.samples,
            field_accuracy: m.field_accuracy,
            exact_match_rate: m.exact_match_rate,
            bit_accuracy: m.bit_accuracy,
        }
    }
}

#[derive(Serialize)]
struct TrainConfigEcho {
    sparsity_rho: f64,
    sparsity_beta: f64,
    l2_lambda: f64,
    max_epochs: usize,
    learning_rate: f64,
    batch_size: usize,
    error_threshold: f64,
    rng_seed: u64,
}

impl TrainConfigEcho {
    fn new(tc: &TrainConfig) -> Self {
        TrainConfigEcho {
            sparsity_rho: tc.sparsity_rho,
            sparsity_beta: tc.sparsity_beta,
            l2_lambda: tc.l2_lambda,
            max_epochs: tc.max_epochs,
            learning_rate: tc.learning_rate,
            batch_size: tc.batch_size,
            error_threshold: tc.error_threshold,
            rng_seed: tc.rng_seed,
        }
    }
}

#[derive(Serialize)]
struct TrainSummary {
    scenario_fingerprint: String,
    hidden: Vec<usize>,
    train_config: TrainConfigEcho,
    epochs_run: usize,
    best_epoch: usize,
    initial_train_loss: f64,
    final_train_loss: f64,
    train: MetricsEcho,
    test: MetricsEcho,
}

pub fn run(
    data: &Path,
    test_data: &Path,
    hidden: &str,
    train_config: Option<&Path>,
    out: &Path,
) -> Result<(), CliError> {
    let hidden = parse_usize_list(hidden, "--hidden")?;
    let train = load_dataset(data)?;
    let test = load_dataset(test_data)?;
    let tc = match train_config {
        Some(path) => TrainConfig::from_file(path)?,
        None => TrainConfig::default(),
    };

    let started = std::time::Instant::now();
    let output = train_pipeline(&train, &test, &hidden, &tc)?;
    save_checkpoint(&output.net, out)?;

    let metrics_csv = metrics_csv_path(out);
    let mut csv = String::from("split,samples,field_accuracy,exact_match_rate,bit_accuracy\n");
    for (name, m) in [("train", output.train_metrics), ("test", output.test_metrics)] {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            name, m.samples, m.field_accuracy, m.exact_match_rate, m.bit_accuracy
        ));
    }
    std::fs::write(&metrics_csv, csv)?;

    let summary = TrainSummary {
        scenario_fingerprint: train.schema.scenario_fingerprint.clone(),
        hidden: hidden.clone(),
        train_config: TrainConfigEcho::new(&tc),
        epochs_run: output.report.train_losses.len() - 1,
        best_epoch: output.report.best_epoch,
        initial_train_loss: output.report.train_losses[0],
        final_train_loss: *output.report.train_losses.last().expect("non-empty"),
        train: output.train_metrics.into(),
        test: output.test_metrics.into(),
    };
    write_json(&summary, &metrics_json_path(out))?;

    println!(
        "trained {} + softmax on {} samples in {:.2}s (epochs {}, best {})",
        hidden.len(),
        train.len(),
        started.elapsed().as_secs_f64(),
        summary.epochs_run,
        summary.best_epoch
    );
    println!(
        "train field/exact/bit accuracy: {:.4}/{:.4}/{:.4}",
        output.train_metrics.field_accuracy,
        output.train_metrics.exact_match_rate,
        output.train_metrics.bit_accuracy
    );
    println!(
        "test  field/exact/bit accuracy: {:.4}/{:.4}/{:.4}",
        output.test_metrics.field_accuracy,
        output.test_metrics.exact_match_rate,
        output.test_metrics.bit_accuracy
    );
    println!(
        "checkpoint -> {} | metrics -> {} and {}",
        out.display(),
        metrics_csv.display(),
        metrics_json_path(out).display()
    );
    Ok(())
}

pub fn metrics_csv_path(ckpt: &Path) -> std::path::PathBuf {
    append_suffix(ckpt, ".metrics.csv")
}

pub fn metrics_json_path(ckpt: &Path) -> std::path::PathBuf {
    append_suffix(ckpt, ".metrics.json")
}

fn append_suffix(path: &Path, suffix: &str) -> std::path::PathBuf {
    let mut name = path.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(suffix);
    path.with_file_name(name)
}
