//! Synthetic range-compressed IQ cubes for breathing point scatterers.
//!
//! Forward model, per frame time `t`, target and virtual element `i`:
//!
//! ```text
//! r(t)      = r0 + g·δ(t) + b(t)
//! s_i(t, r) += ρ · D(r/Δr - bin) · exp(j(4π r(t)/λ - k i d0 sin θ0))
//! ```
//!
//! where `g` is the aspect gain of the viewing radar, `b(t)` any gross body
//! motion, `ρ` the reflectivity and `D` the Dirichlet kernel of the range
//! compression, truncated to ±3 bins. The element phase carries the negative
//! sign so that the beamformer's steering vector `exp(+j k i d0 sin θ)`
//! focuses on `θ0`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::RadarConfig;
use crate::cube::IqCube;
use crate::error::{Error, Result};
use crate::noise::gaussian_pair;

/// Fast-time samples per chirp assumed by the range point-spread function.
pub const FAST_TIME_SAMPLES: usize = 256;
/// Range bins on each side of the target that receive leakage.
pub const PSF_HALF_WIDTH: isize = 3;
/// Period of the oscillating excursion used to model a posture change.
pub const BURST_WOBBLE_PERIOD_S: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalKnot {
    pub t_s: f64,
    pub interval_s: f64,
}

/// Quasi-periodic chest-wall motion.
///
/// The breathing interval starts at `base_interval_s` at `t = 0` and moves
/// linearly between the `interval_drift` knots, holding the last value
/// afterwards.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BreathingModel {
    pub base_interval_s: f64,
    pub amplitude_m: f64,
    #[serde(default = "unit_fundamental")]
    pub harmonic_amps: Vec<f64>,
    #[serde(default)]
    pub interval_drift: Vec<IntervalKnot>,
    #[serde(default)]
    pub phase0: f64,
}

fn unit_fundamental() -> Vec<f64> {
    vec![1.0]
}

impl BreathingModel {
    pub fn steady(interval_s: f64, amplitude_m: f64) -> Self {
        Self {
            base_interval_s: interval_s,
            amplitude_m,
            harmonic_amps: unit_fundamental(),
            interval_drift: Vec::new(),
            phase0: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if !(self.base_interval_s.is_finite() && self.base_interval_s > 0.0) {
            return bad(format!("base interval must be positive, got {}", self.base_interval_s));
        }
        if !(self.amplitude_m > 0.0 && self.amplitude_m <= 0.01) {
            return bad(format!(
                "breathing amplitude must lie in (0, 0.01] m, got {}",
                self.amplitude_m
            ));
        }
        if self.harmonic_amps.first() != Some(&1.0) {
            return bad("harmonic_amps[0] must be 1 (fundamental reference)".into());
        }
        if self.harmonic_amps.iter().any(|a| !a.is_finite()) || !self.phase0.is_finite() {
            return bad("harmonic amplitudes and phase must be finite".into());
        }
        let mut prev = 0.0;
        for k in &self.interval_drift {
            if !(k.t_s > prev && k.interval_s.is_finite() && k.interval_s > 0.0) {
                return bad(format!(
                    "drift knots need strictly increasing times > 0 and positive intervals, \
                     got ({}, {})",
                    k.t_s, k.interval_s
                ));
            }
            prev = k.t_s;
        }
        Ok(())
    }

    fn knots(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        std::iter::once((0.0, self.base_interval_s))
            .chain(self.interval_drift.iter().map(|k| (k.t_s, k.interval_s)))
    }

    /// Instantaneous breathing interval.
    pub fn interval_at(&self, t: f64) -> f64 {
        let mut prev = (0.0, self.base_interval_s);
        for (tk, ik) in self.knots().skip(1) {
            if t < tk {
                let frac = (t - prev.0) / (tk - prev.0);
                return prev.1 + frac.max(0.0) * (ik - prev.1);
            }
            prev = (tk, ik);
        }
        prev.1
    }

    /// Breathing cycles elapsed since `t = 0`, `∫ dt / T(t)`.
    pub fn cycles_at(&self, t: f64) -> f64 {
        let mut cycles = 0.0;
        let mut prev = (0.0, self.base_interval_s);
        for (tk, ik) in self.knots().skip(1) {
            if t <= tk {
                return cycles + segment_cycles(prev, (tk, ik), t);
            }
            cycles += segment_cycles(prev, (tk, ik), tk);
            prev = (tk, ik);
        }
        cycles + (t - prev.0) / prev.1
    }
}

/// `∫_{a.0}^{x} ds / T(s)` with `T` linear from `a` to `b`.
fn segment_cycles(a: (f64, f64), b: (f64, f64), x: f64) -> f64 {
    let slope = (b.1 - a.1) / (b.0 - a.0);
    let dx = x - a.0;
    if slope.abs() < 1e-12 {
        dx / a.1
    } else {
        (slope * dx / a.1).ln_1p() / slope
    }
}

pub fn breathing_waveform(model: &BreathingModel, t: f64) -> f64 {
    let cycles = model.cycles_at(t);
    model.amplitude_m
        * model
            .harmonic_amps
            .iter()
            .enumerate()
            .map(|(h, a)| a * (TAU * (h + 1) as f64 * cycles + model.phase0).sin())
            .sum::<f64>()
}

/// A gross body movement such as a posture change.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MotionBurst {
    pub start_s: f64,
    pub duration_s: f64,
    pub excursion_m: f64,
}

impl MotionBurst {
    /// `excursion · sin(2π (t - start) / 8 s)` while the burst lasts.
    pub fn displacement(&self, t: f64) -> f64 {
        if t >= self.start_s && t < self.start_s + self.duration_s {
            self.excursion_m * (TAU * (t - self.start_s) / BURST_WOBBLE_PERIOD_S).sin()
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneTarget {
    pub range_m: f64,
    pub theta_rad: f64,
    pub reflectivity: f64,
    /// `None` for a static reflector.
    #[serde(default)]
    pub breathing: Option<BreathingModel>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scene {
    pub targets: Vec<SceneTarget>,
    /// Per-element SNR relative to the strongest breathing target; `None`
    /// for a noiseless cube.
    pub snr_db: Option<f64>,
    #[serde(default)]
    pub motion_bursts: Vec<MotionBurst>,
    pub duration_s: f64,
    /// Projection of chest motion onto this radar's line of sight.
    pub aspect_gain: f64,
    pub n_range_bins: usize,
    #[serde(default)]
    pub start_time_s: f64,
}

impl Scene {
    pub fn validate(&self, config: &RadarConfig) -> Result<()> {
        config.validate()?;
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if !(self.duration_s.is_finite() && self.duration_s > 0.0) {
            return bad(format!("duration must be positive, got {}", self.duration_s));
        }
        if !(self.aspect_gain > 0.0 && self.aspect_gain <= 1.0) {
            return bad(format!("aspect gain must lie in (0, 1], got {}", self.aspect_gain));
        }
        if self.n_range_bins == 0 {
            return bad("scene needs at least one range bin".into());
        }
        if !self.start_time_s.is_finite() || self.snr_db.is_some_and(|s| !s.is_finite()) {
            return bad("start time and SNR must be finite".into());
        }
        let extent = self.n_range_bins as f64 * config.range_bin_m;
        for (k, t) in self.targets.iter().enumerate() {
            if !(t.range_m >= 0.0 && t.range_m < extent) {
                return bad(format!(
                    "target {k} at {} m outside range extent [0, {extent})",
                    t.range_m
                ));
            }
            if t.theta_rad.is_nan() || t.theta_rad.abs() >= PI / 2.0 {
                return bad(format!("target {k} at {} rad outside the field of view", t.theta_rad));
            }
            if !(t.reflectivity.is_finite() && t.reflectivity > 0.0) {
                return bad(format!("target {k} reflectivity must be positive"));
            }
            if let Some(b) = &t.breathing {
                b.validate()?;
            }
        }
        for b in &self.motion_bursts {
            if !(b.start_s >= 0.0 && b.duration_s > 0.0 && b.excursion_m.is_finite()) {
                return bad(format!("invalid motion burst {b:?}"));
            }
            if b.start_s + b.duration_s > self.duration_s + 1e-9 {
                return bad(format!("motion burst {b:?} extends past the scene"));
            }
        }
        Ok(())
    }

    pub fn n_frames(&self, config: &RadarConfig) -> usize {
        (self.duration_s / config.frame_interval_s).round() as usize
    }

    fn burst_displacement(&self, t: f64) -> f64 {
        self.motion_bursts.iter().map(|b| b.displacement(t)).sum()
    }

    /// Radial offset of target `k` from its rest range at time `t`.
    pub fn target_offset(&self, k: usize, t: f64) -> f64 {
        match &self.targets[k].breathing {
            Some(model) => {
                self.aspect_gain * breathing_waveform(model, t) + self.burst_displacement(t)
            }
            None => 0.0,
        }
    }

    fn reference_power(&self) -> f64 {
        let breathing = self
            .targets
            .iter()
            .filter(|t| t.breathing.is_some())
            .map(|t| t.reflectivity * t.reflectivity)
            .fold(0.0, f64::max);
        if breathing > 0.0 {
            breathing
        } else {
            self.targets
                .iter()
                .map(|t| t.reflectivity * t.reflectivity)
                .fold(0.0, f64::max)
        }
    }

    /// Complex noise variance per sample (both components together).
    pub fn noise_power(&self) -> f64 {
        match self.snr_db {
            Some(snr) => self.reference_power() / 10f64.powf(snr / 10.0),
            None => 0.0,
        }
    }
}

/// Range-compression point-spread function at `u` bins from the target.
pub fn dirichlet(u: f64) -> f64 {
    let n = FAST_TIME_SAMPLES as f64;
    let den = n * (PI * u / n).sin();
    if den.abs() < 1e-12 {
        1.0
    } else {
        (PI * u).sin() / den
    }
}

pub fn synthesize_cube(scene: &Scene, config: &RadarConfig, seed: u64) -> Result<IqCube> {
    scene.validate(config)?;
    let n_frames = scene.n_frames(config);
    let n_el = config.n_virtual();
    let n_r = scene.n_range_bins;
    let lambda = config.lambda();
    let element_step = config.wavenumber() * config.element_spacing();
    let noise_scale = (scene.noise_power() / 2.0).sqrt();

    let element_phasors: Vec<Vec<Complex64>> = scene
        .targets
        .iter()
        .map(|t| {
            (0..n_el)
                .map(|i| Complex64::from_polar(1.0, -element_step * i as f64 * t.theta_rad.sin()))
                .collect()
        })
        .collect();

    let mut samples = vec![Complex64::new(0.0, 0.0); n_frames * n_el * n_r];
    for f in 0..n_frames {
        let t = f as f64 * config.frame_interval_s;
        let frame = &mut samples[f * n_el * n_r..(f + 1) * n_el * n_r];
        for (k, target) in scene.targets.iter().enumerate() {
            let r = target.range_m + scene.target_offset(k, t);
            let pos = r / config.range_bin_m;
            let carrier = Complex64::from_polar(target.reflectivity, 4.0 * PI * r / lambda);
            let centre = pos.round() as isize;
            for b in (centre - PSF_HALF_WIDTH)..=(centre + PSF_HALF_WIDTH) {
                if b < 0 || b >= n_r as isize {
                    continue;
                }
                let amp = carrier * dirichlet(b as f64 - pos);
                for (i, ph) in element_phasors[k].iter().enumerate() {
                    frame[i * n_r + b as usize] += amp * ph;
                }
            }
        }
        if noise_scale > 0.0 {
            let base = (f * n_el * n_r) as u64;
            for (j, s) in frame.iter_mut().enumerate() {
                *s += gaussian_pair(seed, base + j as u64) * noise_scale;
            }
        }
    }

    IqCube::new(*config, n_frames, n_r, scene.start_time_s, samples)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruthSample {
    pub t_s: f64,
    pub true_interval_s: f64,
    pub true_displacement_m: f64,
}

/// Per-frame ground truth for the first breathing target in the scene, as
/// seen by this radar (aspect gain and bursts included).
pub fn ground_truth(scene: &Scene, config: &RadarConfig) -> Result<Vec<TruthSample>> {
    scene.validate(config)?;
    let (k, model) = scene
        .targets
        .iter()
        .enumerate()
        .find_map(|(k, t)| t.breathing.as_ref().map(|m| (k, m)))
        .ok_or_else(|| Error::InvalidParameter("scene has no breathing target".into()))?;
    Ok((0..scene.n_frames(config))
        .map(|f| {
            let t = f as f64 * config.frame_interval_s;
            TruthSample {
                t_s: scene.start_time_s + t,
                true_interval_s: model.interval_at(t),
                true_displacement_m: scene.target_offset(k, t),
            }
        })
        .collect())
}

pub fn write_truth_csv<W: std::io::Write>(truth: &[TruthSample], sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    for row in truth {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

/// One animal seen by two radars from different aspects.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualRadarSetup {
    pub breathing: BreathingModel,
    pub gains: [f64; 2],
    pub snr_db: [f64; 2],
    pub duration_s: f64,
    pub start_time_s: f64,
    /// `(range_m, theta_rad)` of the body surface for each radar.
    pub positions: [(f64, f64); 2],
    pub n_range_bins: usize,
    #[serde(default)]
    pub motion_bursts: Vec<MotionBurst>,
}

impl DualRadarSetup {
    /// 18 minutes starting 11:37, breathing interval drifting between 1.2 s
    /// and 2.9 s, 0.5 mm chest amplitude, aspect gains 1.0 / 0.2 at
    /// 25 dB / 15 dB per-element SNR.
    pub fn bundled(config: &RadarConfig) -> Self {
        let knot = |t_s, interval_s| IntervalKnot { t_s, interval_s };
        Self {
            breathing: BreathingModel {
                base_interval_s: 1.8,
                amplitude_m: 0.5e-3,
                harmonic_amps: vec![1.0, 0.2],
                interval_drift: vec![
                    knot(180.0, 2.9),
                    knot(420.0, 2.2),
                    knot(600.0, 1.5),
                    knot(840.0, 1.2),
                    knot(1080.0, 1.6),
                ],
                phase0: 0.0,
            },
            gains: [1.0, 0.2],
            snr_db: [25.0, 15.0],
            duration_s: 1080.0,
            start_time_s: 11.0 * 3600.0 + 37.0 * 60.0,
            positions: [
                (14.0 * config.range_bin_m, 10f64.to_radians()),
                (11.0 * config.range_bin_m, (-20f64).to_radians()),
            ],
            n_range_bins: 24,
            motion_bursts: Vec::new(),
        }
    }

    pub fn scene(&self, radar: usize) -> Scene {
        let (range_m, theta_rad) = self.positions[radar];
        Scene {
            targets: vec![SceneTarget {
                range_m,
                theta_rad,
                reflectivity: 1.0,
                breathing: Some(self.breathing.clone()),
            }],
            snr_db: Some(self.snr_db[radar]),
            motion_bursts: self.motion_bursts.clone(),
            duration_s: self.duration_s,
            aspect_gain: self.gains[radar],
            n_range_bins: self.n_range_bins,
            start_time_s: self.start_time_s,
        }
    }
}

#[derive(Debug, Clone)]
pub struct DualRadarCubes {
    pub cubes: [IqCube; 2],
    /// Shared breathing truth (unscaled by aspect gain).
    pub truth: Vec<TruthSample>,
}

pub fn dual_radar_scene(
    setup: &DualRadarSetup,
    config: &RadarConfig,
    seeds: [u64; 2],
) -> Result<DualRadarCubes> {
    for g in setup.gains {
        if !(g > 0.0 && g <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "aspect gains must lie in (0, 1], got {g}"
            )));
        }
    }
    let first = synthesize_cube(&setup.scene(0), config, seeds[0])?;
    let second = synthesize_cube(&setup.scene(1), config, seeds[1])?;
    let truth = (0..first.n_frames())
        .map(|f| {
            let t = f as f64 * config.frame_interval_s;
            TruthSample {
                t_s: setup.start_time_s + t,
                true_interval_s: setup.breathing.interval_at(t),
                true_displacement_m: breathing_waveform(&setup.breathing, t),
            }
        })
        .collect();
    Ok(DualRadarCubes {
        cubes: [first, second],
        truth,
    })
}
