//! Dataset CSV format.
//!
//! Line 1 carries the schema values in the order
//! `schema_version,K,U,F,n,scenario_fingerprint`. Every following line is
//! one sample: `seed,method,utility,` then K*U*(F+1) input floats and
//! 2*2*n*K*F target bits. Floats use Rust's shortest round-trip formatting,
//! so write -> read reproduces every value bit-exactly. UTF-8, LF endings.

use std::fs;
use std::path::Path;

use thiserror::Error;

use super::{Dataset, DatasetSchema, Sample};
use crate::solvers::SolveMethod;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}:{line}: {reason}")]
    Format {
        path: String,
        line: usize,
        reason: String,
    },
}

fn format_err(path: &Path, line: usize, reason: impl Into<String>) -> DataError {
    DataError::Format {
        path: path.display().to_string(),
        line,
        reason: reason.into(),
    }
}

/// Serializes a dataset to its CSV form.
pub fn to_csv_string(ds: &Dataset) -> String {
    let s = &ds.schema;
    let mut out = String::new();
    out.push_str(&format!(
        "{},{},{},{},{},{}\n",
        s.schema_version, s.cells, s.users_per_cell, s.subbands, s.bits_per_field,
        s.scenario_fingerprint
    ));
    for sample in &ds.samples {
        out.push_str(&format!(
            "{},{},{}",
            sample.seed,
            sample.method,
            sample.utility
        ));
        for v in &sample.input {
            out.push(',');
            out.push_str(&format!("{v}"));
        }
        for b in &sample.target_bits {
            out.push(',');
            out.push_str(if *b == 0 { "0" } else { "1" });
        }
        out.push('\n');
    }
    out
}

/// Writes a dataset CSV file.
pub fn write_csv(ds: &Dataset, path: &Path) -> Result<(), DataError> {
    fs::write(path, to_csv_string(ds)).map_err(|source| DataError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Parses a dataset from its CSV form.
pub fn parse_csv(text: &str, path: &Path) -> Result<Dataset, DataError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| format_err(path, 1, "empty file"))?;
    let fields: Vec<&str> = header.split(',').collect();
    if fields.len() != 6 {
        return Err(format_err(
            path,
            1,
            format!("header must have 6 fields, got {}", fields.len()),
        ));
    }
    let parse_usize = |s: &str, line: usize, what: &str| {
        s.parse::<usize>()
            .map_err(|e| format_err(path, line, format!("bad {what} `{s}`: {e}")))
    };
    let schema_version = parse_usize(fields[0], 1, "schema_version")? as u32;
    if schema_version != 1 {
        return Err(format_err(
            path,
            1,
            format!("unsupported schema_version {schema_version}"),
        ));
    }
    let schema = DatasetSchema {
        schema_version,
        cells: parse_usize(fields[1], 1, "K")?,
        users_per_cell: parse_usize(fields[2], 1, "U")?,
        subbands: parse_usize(fields[3], 1, "F")?,
        bits_per_field: parse_usize(fields[4], 1, "n")? as u32,
        scenario_fingerprint: fields[5].to_string(),
    };
    let input_len = schema.input_len();
    let output_len = schema.output_len();
    let expected_fields = 3 + input_len + output_len;

    let mut samples = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != expected_fields {
            return Err(format_err(
                path,
                line_no,
                format!("expected {expected_fields} fields, got {}", fields.len()),
            ));
        }
        let seed = fields[0]
            .parse::<u64>()
            .map_err(|e| format_err(path, line_no, format!("bad seed `{}`: {e}", fields[0])))?;
        let method = SolveMethod::parse(fields[1])
            .ok_or_else(|| format_err(path, line_no, format!("unknown method `{}`", fields[1])))?;
        let utility = fields[2]
            .parse::<f64>()
            .map_err(|e| format_err(path, line_no, format!("bad utility `{}`: {e}", fields[2])))?;
        let mut input = Vec::with_capacity(input_len);
        for s in &fields[3..3 + input_len] {
            input.push(s.parse::<f64>().map_err(|e| {
                format_err(path, line_no, format!("bad input value `{s}`: {e}"))
            })?);
        }
        let mut target_bits = Vec::with_capacity(output_len);
        for s in &fields[3 + input_len..] {
            match *s {
                "0" => target_bits.push(0),
                "1" => target_bits.push(1),
                other => {
                    return Err(format_err(
                        path,
                        line_no,
                        format!("target bits must be 0 or 1, got `{other}`"),
                    ))
                }
            }
        }
        samples.push(Sample {
            input,
            target_bits,
            seed,
            method,
            utility,
        });
    }
    Ok(Dataset { schema, samples })
}

/// Reads a dataset CSV file.
pub fn read_csv(path: &Path) -> Result<Dataset, DataError> {
    let text = fs::read_to_string(path).map_err(|source| DataError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_csv(&text, path)
}
