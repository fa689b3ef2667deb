//! Radar unit constants and virtual-array geometry.
//!
//! The defaults describe a 79 GHz FMCW module with 3.6 GHz sweep bandwidth and
//! a 3 Tx x 4 Rx MIMO layout, which forms a 12-element uniform linear virtual
//! array with half-wavelength spacing.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Physical constants of one radar unit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RadarConfig {
    pub center_frequency_hz: f64,
    pub bandwidth_hz: f64,
    pub n_tx: u32,
    pub n_rx: u32,
    /// Slow-time sampling period.
    pub frame_interval_s: f64,
    /// Spacing of the range gates in the range-compressed data.
    pub range_bin_m: f64,
    /// Datasheet range resolution. Informational only.
    pub stated_range_resolution_m: f64,
}

impl Default for RadarConfig {
    fn default() -> Self {
        let bandwidth_hz = 3.6e9;
        Self {
            center_frequency_hz: 79e9,
            bandwidth_hz,
            n_tx: 3,
            n_rx: 4,
            frame_interval_s: 0.05,
            range_bin_m: SPEED_OF_LIGHT / (2.0 * bandwidth_hz),
            stated_range_resolution_m: 0.0447,
        }
    }
}

impl RadarConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("center_frequency_hz", self.center_frequency_hz),
            ("bandwidth_hz", self.bandwidth_hz),
            ("frame_interval_s", self.frame_interval_s),
            ("range_bin_m", self.range_bin_m),
            ("stated_range_resolution_m", self.stated_range_resolution_m),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be finite and positive, got {value}"
                )));
            }
        }
        if self.n_tx == 0 || self.n_rx == 0 {
            return Err(Error::InvalidConfig(format!(
                "need at least one tx and one rx element, got {}x{}",
                self.n_tx, self.n_rx
            )));
        }
        Ok(())
    }

    /// Number of virtual elements, `n_tx * n_rx`.
    pub fn n_virtual(&self) -> usize {
        self.n_tx as usize * self.n_rx as usize
    }

    /// Carrier wavelength. Panics on an unvalidated non-positive frequency;
    /// use [`wavelength`] for the checked form.
    pub fn lambda(&self) -> f64 {
        wavelength(self).expect("center frequency must be positive")
    }

    /// Carrier wavenumber 2π/λ.
    pub fn wavenumber(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.lambda()
    }

    /// Virtual element spacing, fixed at λ/2.
    pub fn element_spacing(&self) -> f64 {
        self.lambda() / 2.0
    }
}

pub fn wavelength(config: &RadarConfig) -> Result<f64> {
    let f = config.center_frequency_hz;
    if !(f.is_finite() && f > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "center frequency must be positive, got {f}"
        )));
    }
    Ok(SPEED_OF_LIGHT / f)
}

/// Theoretical range resolution c/(2B).
pub fn range_resolution(config: &RadarConfig) -> Result<f64> {
    let b = config.bandwidth_hz;
    if !(b.is_finite() && b > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "bandwidth must be positive, got {b}"
        )));
    }
    Ok(SPEED_OF_LIGHT / (2.0 * b))
}

/// Maps a (tx, rx) pair onto the virtual array, tx-major.
pub fn virtual_index(tx: u32, rx: u32, config: &RadarConfig) -> Result<usize> {
    if tx >= config.n_tx || rx >= config.n_rx {
        return Err(Error::Bounds(format!(
            "(tx={tx}, rx={rx}) outside {}x{} array",
            config.n_tx, config.n_rx
        )));
    }
    Ok(tx as usize * config.n_rx as usize + rx as usize)
}
