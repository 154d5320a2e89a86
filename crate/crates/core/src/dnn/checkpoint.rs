//! Versioned text checkpoints.
//!
//! ```text
//! netalloc-checkpoint v1
//! fingerprint <hex>
//! input_dim <d>
//! output_dim <d>
//! layers <count>
//! layer <index> <activation> <out_dim> <in_dim>
//! w <in_dim values>     (one line per output row, row-major)
//! ...
//! b <out_dim values>
//! ```
//!
//! Values use shortest round-trip float formatting, so load -> forward is
//! bit-identical to the network that was saved.

use std::fs;
use std::path::Path;

use ndarray::{Array1, Array2};

use super::layer::{Activation, LayerParams, NetParams};
use super::DnnError;

const MAGIC: &str = "netalloc-checkpoint v1";

/// Serializes a network to the checkpoint text form.
pub fn checkpoint_string(net: &NetParams) -> String {
    let mut out = String::new();
    out.push_str(MAGIC);
    out.push('\n');
    out.push_str(&format!("fingerprint {}\n", net.fingerprint));
    out.push_str(&format!("input_dim {}\n", net.input_dim));
    out.push_str(&format!("output_dim {}\n", net.output_dim));
    out.push_str(&format!("layers {}\n", net.layers.len()));
    for (idx, layer) in net.layers.iter().enumerate() {
        out.push_str(&format!(
            "layer {} {} {} {}\n",
            idx,
            layer.activation.as_str(),
            layer.out_dim(),
            layer.in_dim()
        ));
        for row in layer.weights.rows() {
            out.push('w');
            for v in row.iter() {
                out.push(' ');
                out.push_str(&format!("{v}"));
            }
            out.push('\n');
        }
        out.push('b');
        for v in layer.biases.iter() {
            out.push(' ');
            out.push_str(&format!("{v}"));
        }
        out.push('\n');
    }
    out
}

/// Writes a checkpoint file.
pub fn save_checkpoint(net: &NetParams, path: &Path) -> Result<(), DnnError> {
    fs::write(path, checkpoint_string(net)).map_err(|source| DnnError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Reads a checkpoint file back into a network.
pub fn load_checkpoint(path: &Path) -> Result<NetParams, DnnError> {
    let text = fs::read_to_string(path).map_err(|source| DnnError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_checkpoint(&text, path)
}

fn parse_checkpoint(text: &str, path: &Path) -> Result<NetParams, DnnError> {
    let path_str = path.display().to_string();
    let err = |line: usize, reason: String| DnnError::CheckpointFormat {
        path: path_str.clone(),
        line,
        reason,
    };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut next = |expected: &str| {
        lines
            .next()
            .ok_or_else(|| err(0, format!("unexpected end of file, expected {expected}")))
    };

    let (line_no, magic) = next("magic header")?;
    if magic != MAGIC {
        return Err(err(line_no, format!("bad magic `{magic}`")));
    }

    let mut field = |name: &str| -> Result<String, DnnError> {
        let (line_no, line) = next(name)?;
        let (key, value) = line
            .split_once(' ')
            .ok_or_else(|| err(line_no, format!("expected `{name} <value>`")))?;
        if key != name {
            return Err(err(line_no, format!("expected `{name}`, got `{key}`")));
        }
        Ok(value.to_string())
    };

    let fingerprint = field("fingerprint")?;
    let input_dim: usize = field("input_dim")?
        .parse()
        .map_err(|e| err(0, format!("bad input_dim: {e}")))?;
    let output_dim: usize = field("output_dim")?
        .parse()
        .map_err(|e| err(0, format!("bad output_dim: {e}")))?;
    let layer_count: usize = field("layers")?
        .parse()
        .map_err(|e| err(0, format!("bad layer count: {e}")))?;

    let mut layers = Vec::with_capacity(layer_count);
    for expected_idx in 0..layer_count {
        let (line_no, header) = next("layer header")?;
        let parts: Vec<&str> = header.split(' ').collect();
        if parts.len() != 5 || parts[0] != "layer" {
            return Err(err(line_no, format!("bad layer header `{header}`")));
        }
        let idx: usize = parts[1]
            .parse()
            .map_err(|e| err(line_no, format!("bad layer index: {e}")))?;
        if idx != expected_idx {
            return Err(err(
                line_no,
                format!("expected layer {expected_idx}, got {idx}"),
            ));
        }
        let activation = Activation::parse(parts[2])
            .ok_or_else(|| err(line_no, format!("unknown activation `{}`", parts[2])))?;
        let out_dim: usize = parts[3]
            .parse()
            .map_err(|e| err(line_no, format!("bad out_dim: {e}")))?;
        let in_dim: usize = parts[4]
            .parse()
            .map_err(|e| err(line_no, format!("bad in_dim: {e}")))?;

        let parse_values = |line_no: usize, line: &str, tag: &str, expected: usize| {
            let mut parts = line.split(' ');
            let got_tag = parts.next().unwrap_or_default();
            if got_tag != tag {
                return Err(err(line_no, format!("expected `{tag}` line")));
            }
            let values: Result<Vec<f64>, DnnError> = parts
                .map(|s| {
                    s.parse::<f64>()
                        .map_err(|e| err(line_no, format!("bad value `{s}`: {e}")))
                })
                .collect();
            let values = values?;
            if values.len() != expected {
                return Err(err(
                    line_no,
                    format!("expected {expected} values, got {}", values.len()),
                ));
            }
            Ok(values)
        };

        let mut weights = Array2::zeros((out_dim, in_dim));
        for row in 0..out_dim {
            let (line_no, line) = next("weight row")?;
            let values = parse_values(line_no, line, "w", in_dim)?;
            for (col, v) in values.into_iter().enumerate() {
                weights[[row, col]] = v;
            }
        }
        let (line_no, line) = next("bias row")?;
        let biases = Array1::from_vec(parse_values(line_no, line, "b", out_dim)?);

        layers.push(LayerParams {
            weights,
            biases,
            activation,
        });
    }
    if let Some((line_no, stray)) = lines.find(|(_, l)| !l.trim().is_empty()) {
        return Err(err(line_no, format!("unexpected trailing content `{stray}`")));
    }

    let net = NetParams {
        layers,
        input_dim,
        output_dim,
        fingerprint,
    };
    net.check_dims().map_err(|e| err(0, e.to_string()))?;
    Ok(net)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_preserves_forward_bit_for_bit() {
        let net = NetParams::random(7, &[5, 4], 6, "cafe0123".into(), 11);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.ckpt");
        save_checkpoint(&net, &path).unwrap();
        let loaded = load_checkpoint(&path).unwrap();
        assert_eq!(net, loaded);

        let x: Vec<f64> = (0..7).map(|i| 0.1 * i as f64 - 0.3).collect();
        let (a, _) = net.forward(&x).unwrap();
        let (b, _) = loaded.forward(&x).unwrap();
        assert_eq!(a, b, "forward pass must be bit-identical after reload");

        // Re-saving reproduces the identical file.
        let original = std::fs::read_to_string(&path).unwrap();
        assert_eq!(checkpoint_string(&loaded), original);
    }

    #[test]
    fn rejects_truncated_and_corrupted_files() {
        let net = NetParams::random(3, &[2], 2, "deadbeef".into(), 12);
        let text = checkpoint_string(&net);
        let dir = tempfile::tempdir().unwrap();

        let truncated = dir.path().join("trunc.ckpt");
        let cut: String = text.lines().take(6).collect::<Vec<_>>().join("\n");
        std::fs::write(&truncated, cut).unwrap();
        assert!(load_checkpoint(&truncated).is_err());

        let corrupted = dir.path().join("corrupt.ckpt");
        std::fs::write(&corrupted, text.replace("sigmoid", "tanh")).unwrap();
        assert!(load_checkpoint(&corrupted).is_err());

        let bad_magic = dir.path().join("magic.ckpt");
        std::fs::write(&bad_magic, text.replace("v1", "v9")).unwrap();
        assert!(load_checkpoint(&bad_magic).is_err());
    }
}
