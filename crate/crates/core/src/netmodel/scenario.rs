//! Static scenario description: problem dimensions, physical constants, and
//! the flat `key = value` config format the CLI reads.

use std::fmt;
use std::path::Path;

use sha2::{Digest, Sha256};
use thiserror::Error;

/// Base-station placement rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BsLayout {
    /// BSs on a straight line, inter-site distance equal to the cell radius.
    Linear,
    /// BSs on a hexagonal spiral grid, inter-site distance equal to the cell
    /// radius, so neighbouring cells partially overlap.
    Hex,
}

impl BsLayout {
    fn as_str(self) -> &'static str {
        match self {
            BsLayout::Linear => "linear",
            BsLayout::Hex => "hex",
        }
    }
}

impl fmt::Display for BsLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// CQI mapping identifier. Only the 16-level linear quantizer over
/// [-10, 30] dB is implemented; the config key exists so that datasets record
/// which mapping produced their inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CqiMapping {
    #[default]
    Linear16,
}

impl CqiMapping {
    fn as_str(self) -> &'static str {
        match self {
            CqiMapping::Linear16 => "linear16",
        }
    }
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("config line {line}: expected `key = value`, got `{text}`")]
    Malformed { line: usize, text: String },
    #[error("config line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("config line {line}: duplicate key `{key}`")]
    DuplicateKey { line: usize, key: String },
    #[error("config line {line}: bad value for `{key}`: {reason}")]
    BadValue {
        line: usize,
        key: String,
        reason: String,
    },
    #[error("config is missing required key `{0}`")]
    MissingKey(&'static str),
    #[error("invalid scenario: {0}")]
    Invalid(String),
}

/// Static problem dimensions and physical constants of one network scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    /// Number of cells / base stations (K).
    pub num_cells: usize,
    /// Frequency sub-bands per cell (F).
    pub subbands: usize,
    /// Users per cell (U).
    pub users_per_cell: usize,
    /// Cell coverage radius in meters.
    pub cell_radius: f64,
    /// Per-cell total power budget in watts.
    pub max_power: f64,
    /// Discrete per-sub-band power levels in watts, strictly increasing.
    pub power_levels: Vec<f64>,
    /// Bandwidth of one sub-band in hertz.
    pub subband_bandwidth: f64,
    /// Receiver noise density in dBm/Hz.
    pub noise_density: f64,
    /// Target bit error rate for the SNR-gap constant.
    pub target_ber: f64,
    /// Log-normal shadowing standard deviation in dB.
    pub shadowing_sigma: f64,
    /// Bits per encoded allocation field (n).
    pub bits_per_field: u32,
    /// Base-station placement rule.
    pub bs_layout: BsLayout,
    /// Base RNG seed for channel realizations.
    pub rng_seed: u64,
    /// CQI mapping identifier (stand-in quantizer; see `cqi_quantize`).
    pub cqi_mapping: CqiMapping,
}

impl ScenarioConfig {
    /// Checks all structural invariants, returning the first violation.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        let fail = |msg: String| Err(ScenarioError::Invalid(msg));
        if self.num_cells == 0 {
            return fail("num_cells must be positive".into());
        }
        if self.subbands == 0 {
            return fail("subbands must be positive".into());
        }
        if self.users_per_cell == 0 {
            return fail("users_per_cell must be positive".into());
        }
        if !(self.cell_radius > 0.0) {
            return fail("cell_radius must be positive".into());
        }
        if !(self.subband_bandwidth > 0.0) {
            return fail("subband_bandwidth must be positive".into());
        }
        if self.power_levels.is_empty() {
            return fail("power_levels must be non-empty".into());
        }
        if !self.power_levels.iter().all(|p| *p > 0.0 && p.is_finite()) {
            return fail("power_levels must all be positive and finite".into());
        }
        if !self.power_levels.windows(2).all(|w| w[0] < w[1]) {
            return fail("power_levels must be strictly increasing".into());
        }
        if self.power_levels[0] * self.subbands as f64 > self.max_power {
            return fail(format!(
                "no feasible power vector: min level {} x {} sub-bands exceeds max_power {}",
                self.power_levels[0], self.subbands, self.max_power
            ));
        }
        let max_index = self.users_per_cell.max(self.power_levels.len());
        if self.bits_per_field >= 64 || (1u64 << self.bits_per_field) <= max_index as u64 {
            return fail(format!(
                "bits_per_field={} cannot index {} values",
                self.bits_per_field, max_index
            ));
        }
        if !(self.target_ber > 0.0 && self.target_ber < 0.2) {
            return fail("target_ber must lie in (0, 0.2)".into());
        }
        if !(self.shadowing_sigma >= 0.0) {
            return fail("shadowing_sigma must be non-negative".into());
        }
        Ok(())
    }

    /// Number of discrete power levels (L).
    pub fn num_levels(&self) -> usize {
        self.power_levels.len()
    }

    /// Total user count across all cells.
    pub fn total_users(&self) -> usize {
        self.num_cells * self.users_per_cell
    }

    /// Global user index of local user `u` in cell `k`.
    pub fn global_user(&self, cell: usize, local_user: usize) -> usize {
        debug_assert!(cell < self.num_cells && local_user < self.users_per_cell);
        cell * self.users_per_cell + local_user
    }

    /// SNR-gap constant for this scenario's target BER.
    pub fn alpha(&self) -> f64 {
        super::alpha(self.target_ber).expect("validated target_ber")
    }

    /// Receiver noise power in watts over one sub-band.
    pub fn noise_power_w(&self) -> f64 {
        super::noise_power(self.noise_density, self.subband_bandwidth)
    }

    /// Canonical text form; the fingerprint hashes exactly this.
    fn canonical(&self) -> String {
        let levels: Vec<String> = self.power_levels.iter().map(|p| format!("{p}")).collect();
        format!(
            "num_cells={}\nsubbands={}\nusers_per_cell={}\ncell_radius={}\nmax_power={}\n\
             power_levels={}\nsubband_bandwidth={}\nnoise_density={}\ntarget_ber={}\n\
             shadowing_sigma={}\nbits_per_field={}\nbs_layout={}\nrng_seed={}\ncqi_mapping={}\n",
            self.num_cells,
            self.subbands,
            self.users_per_cell,
            self.cell_radius,
            self.max_power,
            levels.join(","),
            self.subband_bandwidth,
            self.noise_density,
            self.target_ber,
            self.shadowing_sigma,
            self.bits_per_field,
            self.bs_layout,
            self.rng_seed,
            self.cqi_mapping.as_str(),
        )
    }

    /// Stable hash of the full scenario, used to tie datasets and
    /// checkpoints to the scenario that produced them.
    pub fn fingerprint(&self) -> String {
        let digest = Sha256::digest(self.canonical().as_bytes());
        let mut out = String::with_capacity(16);
        for byte in digest.iter().take(8) {
            out.push_str(&format!("{byte:02x}"));
        }
        out
    }

    /// Parses the flat `key = value` config format.
    ///
    /// Blank lines and lines starting with `#` are ignored. Every key except
    /// `cqi_mapping` is required; keys may not repeat.
    pub fn parse(text: &str) -> Result<Self, ScenarioError> {
        let mut num_cells = None;
        let mut subbands = None;
        let mut users_per_cell = None;
        let mut cell_radius = None;
        let mut max_power = None;
        let mut power_levels: Option<Vec<f64>> = None;
        let mut subband_bandwidth = None;
        let mut noise_density = None;
        let mut target_ber = None;
        let mut shadowing_sigma = None;
        let mut bits_per_field = None;
        let mut bs_layout = None;
        let mut rng_seed = None;
        let mut cqi_mapping = None;

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (key, value) = trimmed.split_once('=').ok_or(ScenarioError::Malformed {
                line,
                text: trimmed.to_string(),
            })?;
            let key = key.trim();
            let value = value.trim();
            let bad = |reason: String| ScenarioError::BadValue {
                line,
                key: key.to_string(),
                reason,
            };
            let dup = || ScenarioError::DuplicateKey {
                line,
                key: key.to_string(),
            };

            macro_rules! set {
                ($slot:ident, $val:expr) => {{
                    if $slot.is_some() {
                        return Err(dup());
                    }
                    $slot = Some($val);
                }};
            }

            match key {
                "num_cells" => set!(num_cells, parse_num::<usize>(value).map_err(bad)?),
                "subbands" => set!(subbands, parse_num::<usize>(value).map_err(bad)?),
                "users_per_cell" => set!(users_per_cell, parse_num::<usize>(value).map_err(bad)?),
                "cell_radius" => set!(cell_radius, parse_num::<f64>(value).map_err(bad)?),
                "max_power" => set!(max_power, parse_num::<f64>(value).map_err(bad)?),
                "power_levels" => {
                    let levels = value
                        .split(',')
                        .map(|s| parse_num::<f64>(s.trim()))
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(bad)?;
                    set!(power_levels, levels);
                }
                "subband_bandwidth" => {
                    set!(subband_bandwidth, parse_num::<f64>(value).map_err(bad)?)
                }
                "noise_density" => set!(noise_density, parse_num::<f64>(value).map_err(bad)?),
                "target_ber" => set!(target_ber, parse_num::<f64>(value).map_err(bad)?),
                "shadowing_sigma" => set!(shadowing_sigma, parse_num::<f64>(value).map_err(bad)?),
                "bits_per_field" => set!(bits_per_field, parse_num::<u32>(value).map_err(bad)?),
                "bs_layout" => {
                    let layout = match value {
                        "linear" => BsLayout::Linear,
                        "hex" => BsLayout::Hex,
                        other => return Err(bad(format!("unknown layout `{other}`"))),
                    };
                    set!(bs_layout, layout);
                }
                "rng_seed" => set!(rng_seed, parse_num::<u64>(value).map_err(bad)?),
                "cqi_mapping" => {
                    let mapping = match value {
                        "linear16" => CqiMapping::Linear16,
                        other => return Err(bad(format!("unknown CQI mapping `{other}`"))),
                    };
                    set!(cqi_mapping, mapping);
                }
                other => {
                    return Err(ScenarioError::UnknownKey {
                        line,
                        key: other.to_string(),
                    })
                }
            }
        }

        let cfg = ScenarioConfig {
            num_cells: num_cells.ok_or(ScenarioError::MissingKey("num_cells"))?,
            subbands: subbands.ok_or(ScenarioError::MissingKey("subbands"))?,
            users_per_cell: users_per_cell.ok_or(ScenarioError::MissingKey("users_per_cell"))?,
            cell_radius: cell_radius.ok_or(ScenarioError::MissingKey("cell_radius"))?,
            max_power: max_power.ok_or(ScenarioError::MissingKey("max_power"))?,
            power_levels: power_levels.ok_or(ScenarioError::MissingKey("power_levels"))?,
            subband_bandwidth: subband_bandwidth
                .ok_or(ScenarioError::MissingKey("subband_bandwidth"))?,
            noise_density: noise_density.ok_or(ScenarioError::MissingKey("noise_density"))?,
            target_ber: target_ber.ok_or(ScenarioError::MissingKey("target_ber"))?,
            shadowing_sigma: shadowing_sigma
                .ok_or(ScenarioError::MissingKey("shadowing_sigma"))?,
            bits_per_field: bits_per_field.ok_or(ScenarioError::MissingKey("bits_per_field"))?,
            bs_layout: bs_layout.ok_or(ScenarioError::MissingKey("bs_layout"))?,
            rng_seed: rng_seed.ok_or(ScenarioError::MissingKey("rng_seed"))?,
            cqi_mapping: cqi_mapping.unwrap_or_default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads and parses a config file.
    pub fn from_file(path: &Path) -> Result<Self, ScenarioError> {
        let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }
}

fn parse_num<T: std::str::FromStr>(s: &str) -> Result<T, String>
where
    T::Err: fmt::Display,
{
    s.parse::<T>().map_err(|e| format!("`{s}`: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn paper_scale_text() -> &'static str {
        "# paper-scale scenario\n\
         num_cells = 5\n\
         subbands = 3\n\
         users_per_cell = 5\n\
         cell_radius = 500\n\
         max_power = 40\n\
         power_levels = 6.4, 12.8, 19.2\n\
         subband_bandwidth = 2.88e6\n\
         noise_density = -174\n\
         target_ber = 1e-6\n\
         shadowing_sigma = 8\n\
         bits_per_field = 3\n\
         bs_layout = hex\n\
         rng_seed = 7\n"
    }

    #[test]
    fn parses_paper_scale_config() {
        let cfg = ScenarioConfig::parse(paper_scale_text()).unwrap();
        assert_eq!(cfg.num_cells, 5);
        assert_eq!(cfg.subbands, 3);
        assert_eq!(cfg.power_levels, vec![6.4, 12.8, 19.2]);
        assert_eq!(cfg.cqi_mapping, CqiMapping::Linear16);
        assert_eq!(cfg.bs_layout, BsLayout::Hex);
    }

    #[test]
    fn rejects_unknown_and_duplicate_keys() {
        let text = format!("{}bogus = 1\n", paper_scale_text());
        assert!(matches!(
            ScenarioConfig::parse(&text),
            Err(ScenarioError::UnknownKey { .. })
        ));
        let text = format!("{}num_cells = 5\n", paper_scale_text());
        assert!(matches!(
            ScenarioConfig::parse(&text),
            Err(ScenarioError::DuplicateKey { .. })
        ));
    }

    #[test]
    fn rejects_decreasing_levels() {
        let text = paper_scale_text().replace("6.4, 12.8, 19.2", "19.2, 12.8, 6.4");
        assert!(matches!(
            ScenarioConfig::parse(&text),
            Err(ScenarioError::Invalid(_))
        ));
    }

    #[test]
    fn rejects_narrow_bit_width() {
        // 2 bits cannot index 5 users.
        let text = paper_scale_text().replace("bits_per_field = 3", "bits_per_field = 2");
        assert!(ScenarioConfig::parse(&text).is_err());
    }

    #[test]
    fn rejects_infeasible_min_power() {
        let text = paper_scale_text().replace("max_power = 40", "max_power = 10");
        assert!(ScenarioConfig::parse(&text).is_err());
    }

    #[test]
    fn rejects_boundary_ber() {
        let text = paper_scale_text().replace("target_ber = 1e-6", "target_ber = 0.2");
        assert!(ScenarioConfig::parse(&text).is_err());
    }

    #[test]
    fn fingerprint_ignores_formatting_but_not_values() {
        let a = ScenarioConfig::parse(paper_scale_text()).unwrap();
        let spaced = paper_scale_text().replace(" = ", "=");
        let b = ScenarioConfig::parse(&spaced).unwrap();
        assert_eq!(a.fingerprint(), b.fingerprint());

        let c = ScenarioConfig::parse(&paper_scale_text().replace("rng_seed = 7", "rng_seed = 8"))
            .unwrap();
        assert_ne!(a.fingerprint(), c.fingerprint());
    }
}
