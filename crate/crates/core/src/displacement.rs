//! Body-surface displacement from the phase of the beamformed target bin,
//! `d(t) = (λ / 4π) ∠I(t, r0, θ0)`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::beamformer::{RadarImage, TargetLocation};
use crate::config::RadarConfig;
use crate::error::{Error, Result};

/// Displacements beyond this are not plausible vital-sign motion.
pub const SANITY_BOUND_M: f64 = 0.1;

#[derive(Debug, Clone, PartialEq)]
pub struct WrappedPhase {
    /// Principal values in (-π, π].
    pub phase: Vec<f64>,
    /// Frames whose sample had zero magnitude; their phase is held from the
    /// previous frame (0 at the first frame).
    pub dropouts: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisplacementTrace {
    pub samples_m: Vec<f64>,
    pub frame_interval_s: f64,
    pub start_time_s: f64,
    pub source: Option<TargetLocation>,
    #[serde(default)]
    pub dropouts: Vec<usize>,
}

impl DisplacementTrace {
    pub fn new(samples_m: Vec<f64>, frame_interval_s: f64, start_time_s: f64) -> Self {
        Self {
            samples_m,
            frame_interval_s,
            start_time_s,
            source: None,
            dropouts: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.samples_m.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples_m.is_empty()
    }

    pub fn time_at(&self, index: usize) -> f64 {
        self.start_time_s + index as f64 * self.frame_interval_s
    }

    /// Indices whose magnitude breaks [`SANITY_BOUND_M`] or that are not finite.
    pub fn sanity_violations(&self) -> Vec<usize> {
        self.samples_m
            .iter()
            .enumerate()
            .filter(|(_, v)| !(v.is_finite() && v.abs() < SANITY_BOUND_M))
            .map(|(i, _)| i)
            .collect()
    }

    /// `√2 × RMS` about the mean: the amplitude of an equivalent sinusoid.
    pub fn rms_amplitude(&self) -> f64 {
        let n = self.samples_m.len() as f64;
        if n == 0.0 {
            return 0.0;
        }
        let mean = self.samples_m.iter().sum::<f64>() / n;
        let var = self.samples_m.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        (2.0 * var).sqrt()
    }

    /// Two-column CSV, `time_s,displacement_m`.
    pub fn write_csv<W: std::io::Write>(&self, sink: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(sink);
        w.write_record(["time_s", "displacement_m"])?;
        for (i, d) in self.samples_m.iter().enumerate() {
            w.write_record([self.time_at(i).to_string(), d.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn wrapped_phase(samples: &[Complex64]) -> WrappedPhase {
    let mut phase = Vec::with_capacity(samples.len());
    let mut dropouts = Vec::new();
    let mut held = 0.0;
    for (i, s) in samples.iter().enumerate() {
        if s.norm_sqr() == 0.0 {
            dropouts.push(i);
            phase.push(held);
            continue;
        }
        let mut p = s.im.atan2(s.re);
        // atan2 returns [-π, π]; map -π onto π.
        if p <= -PI {
            p = PI;
        }
        held = p;
        phase.push(p);
    }
    WrappedPhase { phase, dropouts }
}

/// `∠I(t, r0, θ0)` for every frame of the image.
pub fn extract_phase(image: &RadarImage, loc: &TargetLocation) -> Result<WrappedPhase> {
    if loc.range_bin >= image.n_ranges() || loc.theta_index >= image.grid().n_theta {
        return Err(Error::Bounds(format!(
            "target bin ({}, {}) outside image {}x{}",
            loc.range_bin,
            loc.theta_index,
            image.n_ranges(),
            image.grid().n_theta
        )));
    }
    Ok(wrapped_phase(&image.bin_series(loc.range_bin, loc.theta_index)))
}

/// Removes 2π jumps so successive differences lie in (-π, π].
pub fn unwrap_phase(wrapped: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(wrapped.len());
    let Some(&first) = wrapped.first() else {
        return out;
    };
    out.push(first);
    let mut offset = 0.0;
    for pair in wrapped.windows(2) {
        let diff = pair[1] - pair[0];
        let mut wrapped_diff = diff - TAU * ((diff + PI) / TAU).floor();
        if wrapped_diff == -PI {
            wrapped_diff = PI;
        }
        offset += wrapped_diff - diff;
        out.push(pair[1] + offset);
    }
    out
}

/// `(λ/4π)(φ - φ[0])`, zero-referenced at the first frame.
pub fn phase_to_displacement(
    phase: &[f64],
    config: &RadarConfig,
    start_time_s: f64,
) -> Result<DisplacementTrace> {
    config.validate()?;
    let scale = config.lambda() / (4.0 * PI);
    let reference = phase.first().copied().unwrap_or(0.0);
    let samples = phase.iter().map(|p| scale * (p - reference)).collect();
    Ok(DisplacementTrace::new(samples, config.frame_interval_s, start_time_s))
}

/// Wrapped phase, unwrapping and scaling in one pass over a beam series.
pub fn displacement_from_beam(
    beam: &[Complex64],
    config: &RadarConfig,
    start_time_s: f64,
    source: Option<TargetLocation>,
) -> Result<DisplacementTrace> {
    let wrapped = wrapped_phase(beam);
    let unwrapped = unwrap_phase(&wrapped.phase);
    let mut trace = phase_to_displacement(&unwrapped, config, start_time_s)?;
    trace.source = source;
    trace.dropouts = wrapped.dropouts;
    Ok(trace)
}


#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn unwrap_differs_by_multiples_of_two_pi(
            raw in prop::collection::vec(-PI..=PI, 1..200)
        ) {
            let un = unwrap_phase(&raw);
            prop_assert_eq!(un[0], raw[0]);
            for (u, w) in un.iter().zip(&raw) {
                let k = (u - w) / TAU;
                prop_assert!((k - k.round()).abs() < 1e-9);
            }
            for p in un.windows(2) {
                let d = p[1] - p[0];
                prop_assert!(d > -PI - 1e-9 && d <= PI + 1e-9);
            }
        }

        #[test]
        fn displacement_is_affine_in_phase(
            phase in prop::collection::vec(-50.0f64..50.0, 2..50),
            scale in 0.01f64..100.0,
        ) {
            let cfg = RadarConfig::default();
            let base = phase_to_displacement(&phase, &cfg, 0.0).unwrap();
            let scaled: Vec<f64> = phase.iter().map(|p| phase[0] + scale * (p - phase[0])).collect();
            let out = phase_to_displacement(&scaled, &cfg, 0.0).unwrap();
            for (a, b) in base.samples_m.iter().zip(&out.samples_m) {
                prop_assert!((scale * a - b).abs() <= 1e-12 * (1.0 + b.abs()));
            }
        }
    }
}
