//! The `--config` document and the command-line overrides layered on top.

use std::path::Path;

use breathradar::{AngleGrid, ProcessingOptions, RadarConfig};
use clap::Args;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::files::read_json;

/// Everything optional; absent keys fall back to library defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Settings {
    /// Radar used by `simulate` when the scene document has none.
    pub radar: Option<RadarConfig>,
    pub processing: ProcessingOptions,
    pub exclude_pct: Option<f64>,
    /// Pairing tolerance for `evaluate`; half the hop when absent.
    pub pair_tolerance_s: Option<f64>,
    pub seed: Option<u64>,
}

impl Settings {
    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        match path {
            Some(p) => read_json(p),
            None => Ok(Self::default()),
        }
    }

    pub fn exclude_pct(&self) -> f64 {
        self.exclude_pct.unwrap_or(breathradar::evaluation::DEFAULT_EXCLUDE_PCT)
    }

    pub fn pair_tolerance_s(&self) -> f64 {
        self.pair_tolerance_s
            .unwrap_or(self.processing.estimator.hop_s / 2.0)
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct ImagingArgs {
    /// Lower edge of the azimuth grid in degrees.
    #[arg(long)]
    pub theta_min_deg: Option<f64>,
    /// Upper edge of the azimuth grid in degrees.
    #[arg(long)]
    pub theta_max_deg: Option<f64>,
    /// Azimuth grid spacing in degrees.
    #[arg(long)]
    pub theta_step_deg: Option<f64>,
    /// Taylor taper: number of nearly equal sidelobes.
    #[arg(long)]
    pub nbar: Option<usize>,
    /// Taylor taper: sidelobe level in dB (negative).
    #[arg(long, allow_hyphen_values = true)]
    pub sidelobe_db: Option<f64>,
    /// Slow-time span, from the start of the cube, used to localise the target.
    #[arg(long)]
    pub span_s: Option<f64>,
}

impl ImagingArgs {
    pub fn apply(&self, opts: &mut ProcessingOptions) -> CliResult<()> {
        if self.theta_min_deg.is_some() || self.theta_max_deg.is_some() || self.theta_step_deg.is_some() {
            let g = opts.grid;
            let min = self.theta_min_deg.unwrap_or(g.theta_min_rad.to_degrees());
            let max = self.theta_max_deg.unwrap_or(g.theta_max_rad.to_degrees());
            let step = self.theta_step_deg.unwrap_or_else(|| {
                if g.n_theta > 1 {
                    (g.theta_max_rad - g.theta_min_rad).to_degrees() / (g.n_theta - 1) as f64
                } else {
                    1.0
                }
            });
            opts.grid = AngleGrid::from_degrees(min, max, step)?;
        }
        if let Some(v) = self.nbar {
            opts.taper.nbar = v;
        }
        if let Some(v) = self.sidelobe_db {
            opts.taper.sidelobe_db = v;
        }
        if let Some(v) = self.span_s {
            opts.localization_span_s = v;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct EstimatorArgs {
    /// Correlation window length in seconds.
    #[arg(long)]
    pub window_s: Option<f64>,
    /// Stride between successive estimates in seconds.
    #[arg(long)]
    pub hop_s: Option<f64>,
    /// Number of lag multiples summed per candidate interval.
    #[arg(long)]
    pub harmonics: Option<usize>,
    /// Decay constant of the harmonic weights.
    #[arg(long)]
    pub decay: Option<f64>,
    /// Shortest candidate interval in seconds.
    #[arg(long)]
    pub tau_min: Option<f64>,
    /// Longest candidate interval in seconds.
    #[arg(long)]
    pub tau_max: Option<f64>,
    /// Peak-to-peak displacement, in mm, above which a window is motion-flagged.
    #[arg(long)]
    pub motion_threshold_mm: Option<f64>,
    /// Relative score at which a divisor of the peak lag is preferred.
    #[arg(long)]
    pub subharmonic_ratio: Option<f64>,
}

impl EstimatorArgs {
    pub fn apply(&self, opts: &mut ProcessingOptions, frame_interval_s: f64) -> CliResult<()> {
        let e = &mut opts.estimator;
        if let Some(w) = self.window_s {
            if !(w.is_finite() && w > 0.0) {
                return Err(CliError::params(format!("--window-s must be positive, got {w}")));
            }
            *e = e.with_window_s(w, frame_interval_s);
        }
        if let Some(v) = self.hop_s {
            e.hop_s = v;
        }
        if let Some(v) = self.harmonics {
            e.harmonics = v;
        }
        if let Some(v) = self.decay {
            e.decay = v;
        }
        if let Some(v) = self.tau_min {
            e.tau_min_s = v;
        }
        if let Some(v) = self.tau_max {
            e.tau_max_s = v;
        }
        if let Some(v) = self.motion_threshold_mm {
            e.motion_threshold_m = v * 1e-3;
        }
        if let Some(v) = self.subharmonic_ratio {
            e.subharmonic_ratio = v;
        }
        e.validate(frame_interval_s)?;
        Ok(())
    }
}
