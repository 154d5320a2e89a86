//! `netalloc sweep`: train one model per swept value (hidden-layer count or
//! training-sample count) and emit the accuracy curve.

use std::path::Path;

use serde::Serialize;

use super::train::{train_pipeline, PipelineOutput};
use super::{load_dataset, parse_usize_list};
use crate::report::{json_sibling, write_json};
use crate::{AxisArg, CliError};
use netalloc::dataset::Dataset;
use netalloc::dnn::{geometric_widths, TrainConfig};
use netalloc::par;

#[derive(Serialize)]
struct SweepRow {
    value: usize,
    hidden: Vec<usize>,
    train_field_accuracy: f64,
    test_field_accuracy: f64,
    train_exact_match_rate: f64,
    test_exact_match_rate: f64,
    train_bit_accuracy: f64,
    test_bit_accuracy: f64,
}

#[derive(Serialize)]
struct SweepSummary {
    axis: String,
    values: Vec<usize>,
    scenario_fingerprint: String,
    train_samples: usize,
    test_samples: usize,
    rows: Vec<SweepRow>,
}

pub fn run(
    axis: AxisArg,
    values: &str,
    data: &Path,
    test_data: &Path,
    hidden: Option<&str>,
    train_config: Option<&Path>,
    out: &Path,
) -> Result<(), CliError> {
    let values = parse_usize_list(values, "--values")?;
    let train = load_dataset(data)?;
    let test = load_dataset(test_data)?;
    let tc = match train_config {
        Some(path) => TrainConfig::from_file(path)?,
        None => TrainConfig::default(),
    };
    let input_dim = train.schema.input_len();

    // Resolve each sweep point to (training subset, hidden widths).
    let points: Vec<(usize, Dataset, Vec<usize>)> = match axis {
        AxisArg::Layers => values
            .iter()
            .map(|&v| (v, train.clone(), geometric_widths(input_dim, v, None)))
            .collect(),
        AxisArg::Samples => {
            let widths = match hidden {
                Some(h) => parse_usize_list(h, "--hidden")?,
                None => {
                    return Err(CliError::Usage(
                        "--hidden is required for the samples axis".into(),
                    ))
                }
            };
            let mut points = Vec::with_capacity(values.len());
            for &v in &values {
                if v > train.len() {
                    return Err(CliError::Usage(format!(
                        "sample count {v} exceeds the {} available training samples",
                        train.len()
                    )));
                }
                let subset = Dataset {
                    schema: train.schema.clone(),
                    samples: train.samples[..v].to_vec(),
                };
                points.push((v, subset, widths.clone()));
            }
            points
        }
    };

    let started = std::time::Instant::now();
    let results: Vec<Result<PipelineOutput, CliError>> =
        par::map_indexed(points.len(), |i| {
            let (_, subset, widths) = &points[i];
            train_pipeline(subset, &test, widths, &tc)
        });

    let mut rows = Vec::with_capacity(points.len());
    for ((value, _, widths), result) in points.iter().zip(results) {
        let output = result?;
        rows.push(SweepRow {
            value: *value,
            hidden: widths.clone(),
            train_field_accuracy: output.train_metrics.field_accuracy,
            test_field_accuracy: output.test_metrics.field_accuracy,
            train_exact_match_rate: output.train_metrics.exact_match_rate,
            test_exact_match_rate: output.test_metrics.exact_match_rate,
            train_bit_accuracy: output.train_metrics.bit_accuracy,
            test_bit_accuracy: output.test_metrics.bit_accuracy,
        });
    }

    let mut csv = String::from("value,train_accuracy,test_accuracy\n");
    for row in &rows {
        csv.push_str(&format!(
            "{},{},{}\n",
            row.value, row.train_field_accuracy, row.test_field_accuracy
        ));
    }
    std::fs::write(out, csv)?;

    let axis_name = match axis {
        AxisArg::Layers => "layers",
        AxisArg::Samples => "samples",
    };
    let summary = SweepSummary {
        axis: axis_name.to_string(),
        values: values.clone(),
        scenario_fingerprint: train.schema.scenario_fingerprint.clone(),
        train_samples: train.len(),
        test_samples: test.len(),
        rows,
    };
    write_json(&summary, &json_sibling(out))?;

    println!(
        "swept {axis_name} over {:?} in {:.2}s",
        values,
        started.elapsed().as_secs_f64()
    );
    for row in &summary.rows {
        println!(
            "  {axis_name}={}: train {:.4}, test {:.4}",
            row.value, row.train_field_accuracy, row.test_field_accuracy
        );
    }
    println!(
        "curve -> {} and {}",
        out.display(),
        json_sibling(out).display()
    );
    Ok(())
}
