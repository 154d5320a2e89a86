pub mod generate;
pub mod oracle_compare;
pub mod sweep;
pub mod train;

use std::path::Path;

use crate::CliError;
use netalloc::dataset::{Dataset, EncodingDims};

/// Encoding dimensions recovered from a persisted dataset. The schema line
/// carries every dimension except the power-level count, which is inferred
/// as one past the largest power index appearing in the targets.
pub fn dims_from_dataset(ds: &Dataset) -> EncodingDims {
    let n = ds.schema.bits_per_field as usize;
    let mut max_power_idx = 0usize;
    for sample in &ds.samples {
        let mut cursor = 0usize;
        for _ in 0..ds.schema.cells * ds.schema.subbands {
            let mut value = 0usize;
            for i in 0..n {
                value = (value << 1) | sample.target_bits[cursor + i] as usize;
            }
            max_power_idx = max_power_idx.max(value);
            // Skip the power complement and the whole assignment field.
            cursor += 4 * n;
        }
    }
    EncodingDims {
        cells: ds.schema.cells,
        users_per_cell: ds.schema.users_per_cell,
        subbands: ds.schema.subbands,
        bits_per_field: ds.schema.bits_per_field,
        power_levels: max_power_idx + 1,
    }
}

/// Loads a dataset, rejecting empty ones.
pub fn load_dataset(path: &Path) -> Result<Dataset, CliError> {
    let ds = netalloc::dataset::read_csv(path)?;
    if ds.samples.is_empty() {
        return Err(CliError::DataFormat(format!(
            "{} contains no samples",
            path.display()
        )));
    }
    Ok(ds)
}

/// Parses a comma-separated list of positive integers.
pub fn parse_usize_list(text: &str, what: &str) -> Result<Vec<usize>, CliError> {
    let values: Result<Vec<usize>, _> = text.split(',').map(|s| s.trim().parse()).collect();
    match values {
        Ok(v) if !v.is_empty() && v.iter().all(|&x| x > 0) => Ok(v),
        _ => Err(CliError::Usage(format!(
            "{what} must be a comma-separated list of positive integers, got `{text}`"
        ))),
    }
}
