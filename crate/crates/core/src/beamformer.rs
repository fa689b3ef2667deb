//! Delay-and-sum imaging over the virtual array and target localisation.
//!
//! The complex image is `I(t, r, θ) = Σ_i α_i w_i(θ) s_i(t, r)` with the
//! steering phase `w_i(θ) = exp(j k i d0 sin θ)`. Summation over elements is
//! always done in ascending element order.

use std::ops::Range;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::RadarConfig;
use crate::cube::IqCube;
use crate::error::{Error, Result};
use crate::taylor::TaylorWeights;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AngleGrid {
    pub theta_min_rad: f64,
    pub theta_max_rad: f64,
    pub n_theta: usize,
}

impl Default for AngleGrid {
    /// -60° to +60° in 1° steps.
    fn default() -> Self {
        Self {
            theta_min_rad: (-60.0f64).to_radians(),
            theta_max_rad: 60.0f64.to_radians(),
            n_theta: 121,
        }
    }
}

impl AngleGrid {
    pub fn new(theta_min_rad: f64, theta_max_rad: f64, n_theta: usize) -> Result<Self> {
        let grid = Self {
            theta_min_rad,
            theta_max_rad,
            n_theta,
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn from_degrees(min_deg: f64, max_deg: f64, step_deg: f64) -> Result<Self> {
        if !(step_deg.is_finite() && step_deg > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "angle step must be positive, got {step_deg}"
            )));
        }
        let n = ((max_deg - min_deg) / step_deg + 1e-9).floor() as usize + 1;
        Self::new(min_deg.to_radians(), max_deg.to_radians(), n)
    }

    pub fn validate(&self) -> Result<()> {
        let half_pi = std::f64::consts::FRAC_PI_2;
        let ok = self.n_theta >= 1
            && self.theta_min_rad.is_finite()
            && self.theta_max_rad.is_finite()
            && -half_pi <= self.theta_min_rad
            && self.theta_min_rad < self.theta_max_rad
            && self.theta_max_rad <= half_pi;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "angle grid [{}, {}] x {} must satisfy -π/2 <= min < max <= π/2 and n >= 1",
                self.theta_min_rad, self.theta_max_rad, self.n_theta
            )))
        }
    }

    pub fn theta(&self, index: usize) -> f64 {
        if self.n_theta == 1 {
            return self.theta_min_rad;
        }
        let step = (self.theta_max_rad - self.theta_min_rad) / (self.n_theta - 1) as f64;
        if index + 1 == self.n_theta {
            self.theta_max_rad
        } else {
            self.theta_min_rad + step * index as f64
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_theta).map(|i| self.theta(i)).collect()
    }

    /// Index of the grid point closest to `theta`.
    pub fn nearest(&self, theta: f64) -> usize {
        (0..self.n_theta)
            .min_by(|&a, &b| {
                (self.theta(a) - theta)
                    .abs()
                    .total_cmp(&(self.theta(b) - theta).abs())
            })
            .unwrap_or(0)
    }
}

pub fn steering_vector(theta: f64, config: &RadarConfig) -> Vec<Complex64> {
    let phase_step = config.wavenumber() * config.element_spacing() * theta.sin();
    (0..config.n_virtual())
        .map(|i| Complex64::from_polar(1.0, phase_step * i as f64))
        .collect()
}

/// Complex image over `(frame, range, θ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadarImage {
    values: Vec<Complex64>,
    n_frames: usize,
    n_ranges: usize,
    grid: AngleGrid,
    /// Index of the first imaged frame within the source cube.
    pub first_frame: usize,
    pub range_bin_m: f64,
    pub frame_interval_s: f64,
    pub start_time_s: f64,
}

impl RadarImage {
    pub fn n_frames(&self) -> usize {
        self.n_frames
    }

    pub fn n_ranges(&self) -> usize {
        self.n_ranges
    }

    pub fn grid(&self) -> &AngleGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    #[inline]
    pub fn get(&self, frame: usize, range: usize, theta: usize) -> Complex64 {
        self.values[(frame * self.n_ranges + range) * self.grid.n_theta + theta]
    }

    /// Slow-time samples at one (range, θ) bin.
    pub fn bin_series(&self, range: usize, theta: usize) -> Vec<Complex64> {
        (0..self.n_frames).map(|f| self.get(f, range, theta)).collect()
    }
}

fn check_weights(cube: &IqCube, weights: &TaylorWeights) -> Result<()> {
    if weights.weights.len() != cube.n_elements() {
        return Err(Error::DimensionMismatch(format!(
            "{} taper weights for {} virtual elements",
            weights.weights.len(),
            cube.n_elements()
        )));
    }
    Ok(())
}

/// `α_i w_i(θ)` for every grid angle, `[θ][element]` flattened.
fn combined_weights(config: &RadarConfig, grid: &AngleGrid, taper: &[f64]) -> Vec<Complex64> {
    grid.points()
        .into_iter()
        .flat_map(|theta| {
            steering_vector(theta, config)
                .into_iter()
                .zip(taper)
                .map(|(w, a)| w * *a)
                .collect::<Vec<_>>()
        })
        .collect()
}

pub fn form_image(cube: &IqCube, grid: &AngleGrid, weights: &TaylorWeights) -> Result<RadarImage> {
    form_image_frames(cube, 0..cube.n_frames(), grid, weights)
}

/// Image over a sub-range of the cube's frames.
pub fn form_image_frames(
    cube: &IqCube,
    frames: Range<usize>,
    grid: &AngleGrid,
    weights: &TaylorWeights,
) -> Result<RadarImage> {
    grid.validate()?;
    check_weights(cube, weights)?;
    if frames.start > frames.end || frames.end > cube.n_frames() {
        return Err(Error::Bounds(format!(
            "frames {frames:?} outside cube of {} frames",
            cube.n_frames()
        )));
    }
    let n_el = cube.n_elements();
    let n_r = cube.n_ranges();
    let n_th = grid.n_theta;
    let coeffs = combined_weights(cube.config(), grid, &weights.weights);

    let n_frames = frames.len();
    let mut values = Vec::with_capacity(n_frames * n_r * n_th);
    for f in frames.clone() {
        let frame = cube.frame(f);
        for r in 0..n_r {
            for t in 0..n_th {
                let c = &coeffs[t * n_el..(t + 1) * n_el];
                let mut acc = Complex64::new(0.0, 0.0);
                for (i, ci) in c.iter().enumerate() {
                    acc += ci * frame[i * n_r + r];
                }
                values.push(acc);
            }
        }
    }

    Ok(RadarImage {
        values,
        n_frames,
        n_ranges: n_r,
        grid: *grid,
        first_frame: frames.start,
        range_bin_m: cube.config().range_bin_m,
        frame_interval_s: cube.config().frame_interval_s,
        start_time_s: cube.start_time_s() + frames.start as f64 * cube.config().frame_interval_s,
    })
}

/// Beamformed slow-time series at a single `(range, θ)` over all frames.
///
/// Identical, sample for sample, to the corresponding bin of [`form_image`];
/// used to extract long traces without imaging every bin.
pub fn beam_series(
    cube: &IqCube,
    range_bin: usize,
    theta: f64,
    weights: &TaylorWeights,
) -> Result<Vec<Complex64>> {
    check_weights(cube, weights)?;
    if range_bin >= cube.n_ranges() {
        return Err(Error::Bounds(format!(
            "range bin {range_bin} outside {} bins",
            cube.n_ranges()
        )));
    }
    let n_r = cube.n_ranges();
    let coeffs: Vec<Complex64> = steering_vector(theta, cube.config())
        .into_iter()
        .zip(&weights.weights)
        .map(|(w, a)| w * *a)
        .collect();
    Ok((0..cube.n_frames())
        .map(|f| {
            let frame = cube.frame(f);
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, ci) in coeffs.iter().enumerate() {
                acc += ci * frame[i * n_r + range_bin];
            }
            acc
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TargetLocation {
    pub range_bin: usize,
    pub theta_index: usize,
    pub range_m: f64,
    pub theta_rad: f64,
    pub peak_power_db: f64,
}

/// Picks the `(range, θ)` bin with the largest slow-time power after removing
/// each bin's mean over `span` (static clutter). Ties go to the lowest range
/// bin, then the lowest θ index.
///
/// If nothing varies over the span the raw mean power is used instead, so a
/// perfectly static scene still localises its strongest reflector.
pub fn localize_target(image: &RadarImage, span: Range<usize>) -> Result<TargetLocation> {
    if span.is_empty() {
        return Err(Error::InvalidParameter("localisation span is empty".into()));
    }
    if span.end > image.n_frames {
        return Err(Error::Bounds(format!(
            "span {span:?} outside image of {} frames",
            image.n_frames
        )));
    }
    let n_th = image.grid.n_theta;
    let n_bins = image.n_ranges * n_th;
    let len = span.len() as f64;

    let mut mean = vec![Complex64::new(0.0, 0.0); n_bins];
    let mut raw = vec![0.0; n_bins];
    for f in span.clone() {
        let row = &image.values[f * n_bins..(f + 1) * n_bins];
        for (k, v) in row.iter().enumerate() {
            mean[k] += v;
            raw[k] += v.norm_sqr();
        }
    }
    mean.iter_mut().for_each(|m| *m /= len);
    raw.iter_mut().for_each(|p| *p /= len);

    let mut dynamic = vec![0.0; n_bins];
    for f in span {
        let row = &image.values[f * n_bins..(f + 1) * n_bins];
        for (k, v) in row.iter().enumerate() {
            dynamic[k] += (v - mean[k]).norm_sqr();
        }
    }
    dynamic.iter_mut().for_each(|p| *p /= len);

    let pick = |power: &[f64]| -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for (k, &p) in power.iter().enumerate() {
            if p > 0.0 && best.is_none_or(|(_, b)| p > b) {
                best = Some((k, p));
            }
        }
        best
    };

    let (k, power) = pick(&dynamic)
        .or_else(|| pick(&raw))
        .ok_or_else(|| Error::NoTarget("image is identically zero over the span".into()))?;
    let range_bin = k / n_th;
    let theta_index = k % n_th;
    Ok(TargetLocation {
        range_bin,
        theta_index,
        range_m: range_bin as f64 * image.range_bin_m,
        theta_rad: image.grid.theta(theta_index),
        peak_power_db: 10.0 * power.log10(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::taylor::{taylor_weights, DEFAULT_NBAR, DEFAULT_SIDELOBE_DB};
    use std::f64::consts::{FRAC_PI_2, PI};

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn steering_broadside_is_all_ones() {
        let w = steering_vector(0.0, &RadarConfig::default());
        assert_eq!(w.len(), 12);
        assert!(w.iter().all(|v| *v == Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn steering_endfire_alternates() {
        let w = steering_vector(FRAC_PI_2, &RadarConfig::default());
        for (i, v) in w.iter().enumerate() {
            let want = if i % 2 == 0 { 1.0 } else { -1.0 };
            assert!(close(*v, Complex64::new(want, 0.0), 1e-12), "{i}: {v}");
        }
    }

    #[test]
    fn steering_odd_symmetry_and_unit_modulus() {
        let cfg = RadarConfig::default();
        for deg in [-75.0f64, -12.0, 3.5, 40.0, 89.0] {
            let th = deg.to_radians();
            let p = steering_vector(th, &cfg);
            let n = steering_vector(-th, &cfg);
            assert_eq!(p[0], Complex64::new(1.0, 0.0));
            for (a, b) in p.iter().zip(&n) {
                assert!((a.norm() - 1.0).abs() < 1e-15);
                assert!(close(*b, a.conj(), 1e-15));
            }
        }
    }

    #[test]
    fn grid_points_inclusive() {
        let g = AngleGrid::default();
        assert_eq!(g.n_theta, 121);
        assert_eq!(g.theta(0), (-60.0f64).to_radians());
        assert_eq!(g.theta(120), 60.0f64.to_radians());
        assert!((g.theta(60)).abs() < 1e-15);
        assert_eq!(g.nearest(10.2f64.to_radians()), 70);
        assert!(AngleGrid::new(0.5, 0.1, 3).is_err());
        assert!(AngleGrid::new(-PI, 0.1, 3).is_err());
        let g2 = AngleGrid::from_degrees(-30.0, 30.0, 2.0).unwrap();
        assert_eq!(g2.n_theta, 31);
    }

    #[test]
    fn zero_cube_gives_zero_image() {
        let cube = IqCube::zeros(RadarConfig::default(), 3, 4).unwrap();
        let w = taylor_weights(12, DEFAULT_NBAR, DEFAULT_SIDELOBE_DB).unwrap();
        let img = form_image(&cube, &AngleGrid::default(), &w).unwrap();
        assert_eq!(img.values().len(), 3 * 4 * 121);
        assert!(img.values().iter().all(|v| v.norm() == 0.0));
        assert!(matches!(localize_target(&img, 0..3), Err(Error::NoTarget(_))));
    }

    #[test]
    fn single_element_replicates_input() {
        let cfg = RadarConfig {
            n_tx: 1,
            n_rx: 1,
            ..RadarConfig::default()
        };
        let samples: Vec<_> = (0..6).map(|k| Complex64::new(k as f64, 1.0 - k as f64)).collect();
        let cube = IqCube::new(cfg, 2, 3, 0.0, samples.clone()).unwrap();
        let grid = AngleGrid::new(-0.5, 0.5, 5).unwrap();
        let img = form_image(&cube, &grid, &TaylorWeights::uniform(1)).unwrap();
        for f in 0..2 {
            for r in 0..3 {
                for t in 0..5 {
                    assert_eq!(img.get(f, r, t), samples[f * 3 + r]);
                }
            }
        }
    }

    #[test]
    fn weight_length_mismatch() {
        let cube = IqCube::zeros(RadarConfig::default(), 1, 1).unwrap();
        let err = form_image(&cube, &AngleGrid::default(), &TaylorWeights::uniform(4)).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch(_)));
    }

    #[test]
    fn beam_series_matches_image_bin() {
        let cfg = RadarConfig::default();
        let samples: Vec<_> = (0..4 * 12 * 3)
            .map(|k| Complex64::new((k as f64 * 0.37).sin(), (k as f64 * 0.11).cos()))
            .collect();
        let cube = IqCube::new(cfg, 4, 3, 0.0, samples).unwrap();
        let grid = AngleGrid::default();
        let w = taylor_weights(12, DEFAULT_NBAR, DEFAULT_SIDELOBE_DB).unwrap();
        let img = form_image(&cube, &grid, &w).unwrap();
        let beam = beam_series(&cube, 2, grid.theta(77), &w).unwrap();
        assert_eq!(beam, img.bin_series(2, 77));
    }

    #[test]
    fn tie_breaks_to_lowest_bin() {
        let cfg = RadarConfig {
            n_tx: 1,
            n_rx: 1,
            ..RadarConfig::default()
        };
        // two range bins with identical fluctuation
        let samples = vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(-1.0, 0.0),
        ];
        let cube = IqCube::new(cfg, 2, 2, 0.0, samples).unwrap();
        let grid = AngleGrid::new(-0.1, 0.1, 3).unwrap();
        let img = form_image(&cube, &grid, &TaylorWeights::uniform(1)).unwrap();
        let loc = localize_target(&img, 0..2).unwrap();
        assert_eq!((loc.range_bin, loc.theta_index), (0, 0));
        assert!((loc.peak_power_db - 0.0).abs() < 1e-12);
    }

    #[test]
    fn empty_span_rejected() {
        let cube = IqCube::zeros(RadarConfig::default(), 2, 2).unwrap();
        let img = form_image(&cube, &AngleGrid::default(), &TaylorWeights::uniform(12)).unwrap();
        assert!(localize_target(&img, 1..1).is_err());
        assert!(localize_target(&img, 0..5).is_err());
    }
}
