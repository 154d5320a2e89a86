//! Multi-cell downlink network model: scenario configuration, random channel
//! realizations, SINR/utility computation, CQI quantization, and discrete
//! power-vector feasibility.

mod allocation;
mod realization;
mod scenario;

pub use allocation::{feasible_power_vectors, network_utility, Allocation};
pub use realization::{
    sample_realization, sample_realization_with, sinr, NetworkRealization, RealizationOptions,
};
pub use scenario::{BsLayout, CqiMapping, ScenarioConfig, ScenarioError};

use thiserror::Error;

#[derive(Debug, Error)]
#[error("alpha is undefined for target BER {0}: 5*BER must lie in (0, 1)")]
pub struct AlphaDomainError(pub f64);

/// SNR-gap constant for a target bit error rate: -1.5 / ln(5 BER).
///
/// Strictly positive on the valid domain; at BER = 0.2 the logarithm hits
/// zero and the constant is undefined.
pub fn alpha(target_ber: f64) -> Result<f64, AlphaDomainError> {
    if !(target_ber > 0.0) || 5.0 * target_ber >= 1.0 {
        return Err(AlphaDomainError(target_ber));
    }
    Ok(-1.5 / (5.0 * target_ber).ln())
}

/// Receiver noise power in watts for a noise density in dBm/Hz over a
/// bandwidth in Hz.
pub fn noise_power(noise_density_dbm_hz: f64, bandwidth_hz: f64) -> f64 {
    debug_assert!(bandwidth_hz > 0.0);
    let dbm = noise_density_dbm_hz + 10.0 * bandwidth_hz.log10();
    10f64.powf((dbm - 30.0) / 10.0)
}

/// Quantizes an SINR in dB onto the 16-level CQI scale over [-10, 30] dB.
///
/// Values at or below -10 dB map to 0, values at or above 30 dB map to 15,
/// and the interior is divided into 16 equal bins. Monotone non-decreasing
/// and surjective onto 0..=15.
pub fn cqi_quantize(sinr_db: f64) -> u8 {
    debug_assert!(!sinr_db.is_nan());
    if sinr_db <= -10.0 {
        return 0;
    }
    if sinr_db >= 30.0 {
        return 15;
    }
    let bin = ((sinr_db + 10.0) / 40.0 * 16.0).floor();
    (bin.clamp(0.0, 15.0)) as u8
}

/// Cell-edge indicator: 1 when the user sits farther than half the cell
/// radius from its serving BS, 0 otherwise.
pub fn location_indicator(distance_m: f64, cell_radius_m: f64) -> u8 {
    debug_assert!(distance_m >= 0.0 && cell_radius_m > 0.0);
    if distance_m > cell_radius_m / 2.0 {
        1
    } else {
        0
    }
}
