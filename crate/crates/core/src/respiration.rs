//! Respiratory interval estimation by harmonic summation of a windowed,
//! normalised autocorrelation.
//!
//! For a window of `M` samples starting at `t`, each window is demeaned and
//!
//! ```text
//! ρ0(t, τ) = d(t)·d(t+τ) / (|d(t)| |d(t+τ)|)
//! ρ(t, τ)  = Σ_{ℓ=1..L} ρ0(t, ℓτ) exp(-ℓ/ℓ0)
//! τ̂(t)     = argmax_τ ρ(t, τ)
//! ```
//!
//! The lag grid runs over `[tau_min, tau_max]` in steps of the frame interval.
//! The grid peak is refined by a three-point parabola. A noiseless periodic
//! signal scores equally at every integer multiple of its period, so before
//! refinement the estimator checks whether an integer fraction of the grid
//! peak scores within `subharmonic_ratio` of it and, if so, keeps the shorter
//! period.

use serde::{Deserialize, Serialize};

use crate::displacement::DisplacementTrace;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EstimatorParams {
    /// Window length `M` in samples.
    pub window_len: usize,
    /// Number of harmonics `L`.
    pub harmonics: usize,
    /// Harmonic decay constant `ℓ0`.
    pub decay: f64,
    pub tau_min_s: f64,
    pub tau_max_s: f64,
    pub hop_s: f64,
    pub motion_threshold_m: f64,
    /// Minimum score, relative to the grid peak, at which a period that
    /// divides the peak lag is preferred over it.
    pub subharmonic_ratio: f64,
}

impl Default for EstimatorParams {
    fn default() -> Self {
        Self {
            window_len: 300,
            harmonics: 4,
            decay: 2.0,
            tau_min_s: 0.5,
            tau_max_s: 5.0,
            hop_s: 1.0,
            motion_threshold_m: 0.005,
            subharmonic_ratio: 0.85,
        }
    }
}

impl EstimatorParams {
    /// Same parameters with the window expressed in seconds.
    pub fn with_window_s(mut self, window_s: f64, frame_interval_s: f64) -> Self {
        self.window_len = (window_s / frame_interval_s).round() as usize;
        self
    }

    pub fn validate(&self, frame_interval_s: f64) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if !(frame_interval_s.is_finite() && frame_interval_s > 0.0) {
            return bad(format!("frame interval must be positive, got {frame_interval_s}"));
        }
        if self.window_len < 4 {
            return bad(format!("window must hold at least 4 samples, got {}", self.window_len));
        }
        if self.harmonics < 1 {
            return bad("need at least one harmonic".into());
        }
        if !(self.decay.is_finite() && self.decay > 0.0) {
            return bad(format!("decay must be positive, got {}", self.decay));
        }
        if !(self.tau_min_s > 0.0 && self.tau_min_s < self.tau_max_s && self.tau_max_s.is_finite())
        {
            return bad(format!(
                "search band [{}, {}] s must satisfy 0 < min < max",
                self.tau_min_s, self.tau_max_s
            ));
        }
        if self.window_len as f64 * frame_interval_s <= self.tau_max_s {
            return bad(format!(
                "window of {} s must exceed tau_max {} s",
                self.window_len as f64 * frame_interval_s,
                self.tau_max_s
            ));
        }
        if !(self.hop_s.is_finite() && self.hop_s > 0.0) {
            return bad(format!("hop must be positive, got {}", self.hop_s));
        }
        if !(self.motion_threshold_m.is_finite() && self.motion_threshold_m > 0.0) {
            return bad(format!(
                "motion threshold must be positive, got {}",
                self.motion_threshold_m
            ));
        }
        if !(self.subharmonic_ratio > 0.0 && self.subharmonic_ratio <= 1.0) {
            return bad(format!(
                "subharmonic ratio must lie in (0, 1], got {}",
                self.subharmonic_ratio
            ));
        }
        let (lo, hi) = self.lag_bounds(frame_interval_s);
        if lo < 1 || lo > hi {
            return bad(format!(
                "search band [{}, {}] s holds no lag at {} s spacing",
                self.tau_min_s, self.tau_max_s, frame_interval_s
            ));
        }
        Ok(())
    }

    /// Inclusive lag grid in samples.
    pub fn lag_bounds(&self, frame_interval_s: f64) -> (usize, usize) {
        let lo = (self.tau_min_s / frame_interval_s - 1e-9).ceil().max(0.0) as usize;
        let hi = (self.tau_max_s / frame_interval_s + 1e-9).floor().max(0.0) as usize;
        (lo, hi)
    }

    pub fn harmonic_weight(&self, l: usize) -> f64 {
        (-(l as f64) / self.decay).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RespirationEstimate {
    pub t_s: f64,
    pub tau_hat_s: f64,
    pub rate_bpm: f64,
    /// Peak of ρ normalised by the total harmonic weight, in [-1, 1].
    pub peak_corr: f64,
    pub motion_flag: bool,
    pub effective_harmonics: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gap {
    pub t_s: f64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RespirationSeries {
    pub estimates: Vec<RespirationEstimate>,
    pub gaps: Vec<Gap>,
    /// `None` when the series was loaded from CSV.
    pub params: Option<EstimatorParams>,
}

pub fn interval_to_rate(tau_s: f64) -> Result<f64> {
    if !(tau_s.is_finite() && tau_s > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "interval must be positive, got {tau_s}"
        )));
    }
    Ok(60.0 / tau_s)
}

fn check_window(len: usize, t_index: usize, m: usize) -> Result<()> {
    if t_index.checked_add(m).is_none_or(|end| end > len) {
        return Err(Error::Range(format!(
            "window [{t_index}, {t_index}+{m}) exceeds trace of {len} samples"
        )));
    }
    Ok(())
}

fn demeaned(slice: &[f64]) -> Vec<f64> {
    let mean = slice.iter().sum::<f64>() / slice.len() as f64;
    slice.iter().map(|v| v - mean).collect()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `d'(t) - mean(d'(t))` for the `m` samples starting at `t_index`.
pub fn window_demean(samples: &[f64], t_index: usize, m: usize) -> Result<Vec<f64>> {
    check_window(samples.len(), t_index, m)?;
    Ok(demeaned(&samples[t_index..t_index + m]))
}

/// Demeaned windows and their norms, memoised by start offset.
struct WindowCache<'a> {
    samples: &'a [f64],
    base: usize,
    m: usize,
    slots: Vec<Option<(Vec<f64>, f64)>>,
}

impl<'a> WindowCache<'a> {
    fn new(samples: &'a [f64], base: usize, m: usize) -> Self {
        let span = samples.len().saturating_sub(base + m) + 1;
        Self {
            samples,
            base,
            m,
            slots: vec![None; span],
        }
    }

    fn fits(&self, lag: usize) -> bool {
        self.base + lag + self.m <= self.samples.len()
    }

    fn window(&mut self, lag: usize) -> Result<&(Vec<f64>, f64)> {
        if !self.fits(lag) {
            return Err(Error::Range(format!(
                "lag {lag} at {} needs {} samples, trace has {}",
                self.base,
                self.base + lag + self.m,
                self.samples.len()
            )));
        }
        let slot = &mut self.slots[lag];
        if slot.is_none() {
            let start = self.base + lag;
            let raw = &self.samples[start..start + self.m];
            let w = demeaned(raw);
            // rounding in the mean leaves dust on a flat window
            let flat = raw.iter().all(|v| *v == raw[0]);
            let n = if flat { 0.0 } else { norm(&w) };
            *slot = Some((w, n));
        }
        Ok(slot.as_ref().unwrap())
    }

    fn rho0(&mut self, lag: usize) -> Result<f64> {
        let (w0, n0) = self.window(0)?.clone();
        let (wl, nl) = self.window(lag)?;
        if n0 == 0.0 || *nl == 0.0 {
            let at = if n0 == 0.0 { self.base } else { self.base + lag };
            return Err(Error::UndefinedCorrelation(format!(
                "constant window at sample {at}"
            )));
        }
        let r = dot(&w0, wl) / (n0 * nl);
        debug_assert!(r.abs() <= 1.0 + 1e-12, "ρ0 = {r} outside [-1, 1]");
        Ok(r.clamp(-1.0, 1.0))
    }

    fn harmonic_sum(&mut self, lag: usize, harmonics: usize, params: &EstimatorParams) -> Result<(f64, usize)> {
        let mut sum = 0.0;
        let mut used = 0;
        for l in 1..=harmonics {
            if !self.fits(l * lag) {
                continue;
            }
            sum += self.rho0(l * lag)? * params.harmonic_weight(l);
            used += 1;
        }
        if used == 0 {
            return Err(Error::Range(format!(
                "lag {lag} does not fit after sample {}",
                self.base
            )));
        }
        Ok((sum, used))
    }
}

/// Normalised correlation of the two independently demeaned windows at
/// `t_index` and `t_index + lag`.
pub fn autocorr(samples: &[f64], t_index: usize, lag: usize, m: usize) -> Result<f64> {
    check_window(samples.len(), t_index, m)?;
    check_window(samples.len(), t_index + lag, m)?;
    WindowCache::new(samples, t_index, m).rho0(lag)
}

/// `Σ_ℓ ρ0(t, ℓ·lag) exp(-ℓ/ℓ0)`, skipping harmonics that run past the end of
/// the trace.
pub fn harmonic_sum(samples: &[f64], t_index: usize, lag: usize, params: &EstimatorParams) -> Result<f64> {
    check_window(samples.len(), t_index, params.window_len)?;
    WindowCache::new(samples, t_index, params.window_len)
        .harmonic_sum(lag, params.harmonics, params)
        .map(|(v, _)| v)
}

/// True when the peak-to-peak excursion of the demeaned window exceeds the
/// threshold.
pub fn motion_gate(window: &[f64], threshold_m: f64) -> bool {
    if window.is_empty() {
        return false;
    }
    let (lo, hi) = window
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(*v), hi.max(*v)));
    hi - lo > threshold_m
}

/// Scores over the whole lag grid for one window start.
struct LagScan {
    lo: usize,
    scores: Vec<f64>,
    harmonics: usize,
}

impl LagScan {
    fn score(&self, lag: usize) -> f64 {
        self.scores[lag - self.lo]
    }

    fn hi(&self) -> usize {
        self.lo + self.scores.len() - 1
    }

    /// Grid argmax, ties to the larger lag.
    fn argmax(&self) -> usize {
        let mut best = self.lo;
        for lag in self.lo..=self.hi() {
            if self.score(lag) >= self.score(best) {
                best = lag;
            }
        }
        best
    }

    fn climb(&self, mut lag: usize) -> usize {
        loop {
            let left = (lag > self.lo).then(|| self.score(lag - 1));
            let right = (lag < self.hi()).then(|| self.score(lag + 1));
            let here = self.score(lag);
            match (left, right) {
                (_, Some(r)) if r > here && left.is_none_or(|l| r >= l) => lag += 1,
                (Some(l), _) if l > here => lag -= 1,
                _ => return lag,
            }
        }
    }

    fn resolve_subharmonic(&self, peak: usize, ratio: f64) -> usize {
        let peak_score = self.score(peak);
        if peak_score <= 0.0 {
            return peak;
        }
        for divisor in (2..=peak / self.lo).rev() {
            let centre = peak as f64 / divisor as f64;
            let candidates = [centre.floor() as usize, centre.ceil() as usize];
            let best = candidates
                .iter()
                .copied()
                .filter(|&l| l >= self.lo && l <= self.hi())
                .max_by(|&a, &b| self.score(a).total_cmp(&self.score(b)).then(a.cmp(&b)));
            if let Some(lag) = best {
                if self.score(lag) >= ratio * peak_score {
                    return self.climb(lag);
                }
            }
        }
        peak
    }

    /// Three-point parabolic vertex around `lag`: (fractional offset, value).
    fn refine(&self, lag: usize) -> (f64, f64) {
        let y0 = self.score(lag);
        if lag == self.lo || lag == self.hi() {
            return (0.0, y0);
        }
        let ym = self.score(lag - 1);
        let yp = self.score(lag + 1);
        let curvature = ym - 2.0 * y0 + yp;
        if curvature >= 0.0 {
            return (0.0, y0);
        }
        let offset = (0.5 * (ym - yp) / curvature).clamp(-0.5, 0.5);
        (offset, y0 - 0.25 * (ym - yp) * offset)
    }
}

fn scan_lags(samples: &[f64], t_index: usize, params: &EstimatorParams, frame_interval_s: f64) -> Result<LagScan> {
    let m = params.window_len;
    check_window(samples.len(), t_index, m)?;
    let (lo, hi) = params.lag_bounds(frame_interval_s);
    let available = samples.len() - t_index - m;
    let harmonics = (1..=params.harmonics)
        .rev()
        .find(|l| l * hi <= available)
        .ok_or_else(|| {
            Error::Range(format!(
                "lag {hi} does not fit after window at sample {t_index}"
            ))
        })?;

    let mut cache = WindowCache::new(samples, t_index, m);
    let scores = (lo..=hi)
        .map(|lag| cache.harmonic_sum(lag, harmonics, params).map(|(v, _)| v))
        .collect::<Result<Vec<_>>>()?;
    Ok(LagScan {
        lo,
        scores,
        harmonics,
    })
}

/// `τ̂` for the window starting at `t_index`.
pub fn estimate_interval(
    trace: &DisplacementTrace,
    t_index: usize,
    params: &EstimatorParams,
) -> Result<RespirationEstimate> {
    let dt = trace.frame_interval_s;
    params.validate(dt)?;
    let samples = &trace.samples_m;
    let scan = scan_lags(samples, t_index, params, dt)?;

    let peak = scan.resolve_subharmonic(scan.argmax(), params.subharmonic_ratio);
    let (offset, value) = scan.refine(peak);
    let tau_hat_s = ((peak as f64 + offset) * dt).clamp(params.tau_min_s, params.tau_max_s);
    let total_weight: f64 = (1..=scan.harmonics).map(|l| params.harmonic_weight(l)).sum();

    let support_end = (t_index + params.window_len + scan.harmonics * scan.hi()).min(samples.len());
    let motion_flag = motion_gate(&samples[t_index..support_end], params.motion_threshold_m);

    Ok(RespirationEstimate {
        t_s: trace.time_at(t_index),
        tau_hat_s,
        rate_bpm: interval_to_rate(tau_hat_s)?,
        peak_corr: (value / total_weight).clamp(-1.0, 1.0),
        motion_flag,
        effective_harmonics: scan.harmonics,
    })
}

/// Estimates every `hop_s` seconds across the trace.
pub fn sliding_series(trace: &DisplacementTrace, params: &EstimatorParams) -> Result<RespirationSeries> {
    let dt = trace.frame_interval_s;
    params.validate(dt)?;
    let (_, hi) = params.lag_bounds(dt);
    let needed = params.window_len + hi;
    if trace.len() < needed {
        return Err(Error::EmptySeries(format!(
            "trace of {} samples is shorter than window plus longest lag ({needed})",
            trace.len()
        )));
    }

    let mut estimates = Vec::new();
    let mut gaps = Vec::new();
    for n in 0usize.. {
        let t_index = (n as f64 * params.hop_s / dt).round() as usize;
        if t_index + needed > trace.len() {
            break;
        }
        match estimate_interval(trace, t_index, params) {
            Ok(est) => estimates.push(est),
            Err(e @ (Error::UndefinedCorrelation(_) | Error::Range(_))) => gaps.push(Gap {
                t_s: trace.time_at(t_index),
                reason: e.to_string(),
            }),
            Err(e) => return Err(e),
        }
    }
    Ok(RespirationSeries {
        estimates,
        gaps,
        params: Some(*params),
    })
}

#[derive(Debug, Serialize, Deserialize)]
struct SeriesRow {
    t_s: f64,
    tau_hat_s: f64,
    rate_bpm: f64,
    peak_corr: f64,
    motion_flag: bool,
    #[serde(rename = "effective_L")]
    effective_l: usize,
}

impl RespirationSeries {
    /// Estimates not flagged for motion.
    pub fn usable(&self) -> impl Iterator<Item = &RespirationEstimate> {
        self.estimates.iter().filter(|e| !e.motion_flag)
    }

    pub fn is_empty(&self) -> bool {
        self.estimates.is_empty() && self.gaps.is_empty()
    }

    /// CSV with columns `t_s,tau_hat_s,rate_bpm,peak_corr,motion_flag,effective_L`.
    /// Skipped windows are written with `NaN` estimates and `effective_L = 0`.
    pub fn write_csv<W: std::io::Write>(&self, sink: W) -> Result<()> {
        let mut rows: Vec<SeriesRow> = self
            .estimates
            .iter()
            .map(|e| SeriesRow {
                t_s: e.t_s,
                tau_hat_s: e.tau_hat_s,
                rate_bpm: e.rate_bpm,
                peak_corr: e.peak_corr,
                motion_flag: e.motion_flag,
                effective_l: e.effective_harmonics,
            })
            .chain(self.gaps.iter().map(|g| SeriesRow {
                t_s: g.t_s,
                tau_hat_s: f64::NAN,
                rate_bpm: f64::NAN,
                peak_corr: f64::NAN,
                motion_flag: false,
                effective_l: 0,
            }))
            .collect();
        rows.sort_by(|a, b| a.t_s.total_cmp(&b.t_s));
        let mut w = csv::Writer::from_writer(sink);
        for row in rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: std::io::Read>(source: R) -> Result<Self> {
        let mut estimates = Vec::new();
        let mut gaps = Vec::new();
        for row in csv::Reader::from_reader(source).deserialize() {
            let row: SeriesRow = row?;
            if row.tau_hat_s.is_finite() && row.effective_l > 0 {
                estimates.push(RespirationEstimate {
                    t_s: row.t_s,
                    tau_hat_s: row.tau_hat_s,
                    rate_bpm: row.rate_bpm,
                    peak_corr: row.peak_corr,
                    motion_flag: row.motion_flag,
                    effective_harmonics: row.effective_l,
                });
            } else {
                gaps.push(Gap {
                    t_s: row.t_s,
                    reason: "skipped".into(),
                });
            }
        }
        Ok(Self {
            estimates,
            gaps,
            params: None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn sine(period_samples: f64, n: usize, phase: f64) -> Vec<f64> {
        (0..n)
            .map(|k| (TAU * k as f64 / period_samples + phase).sin())
            .collect()
    }

    fn trace(samples: Vec<f64>, dt: f64) -> DisplacementTrace {
        DisplacementTrace::new(samples, dt, 0.0)
    }

    #[test]
    fn demean_examples() {
        assert_eq!(window_demean(&[1.0; 4], 0, 4).unwrap(), vec![0.0; 4]);
        assert_eq!(
            window_demean(&[0.0, 1.0, 0.0, 1.0], 0, 4).unwrap(),
            vec![-0.5, 0.5, -0.5, 0.5]
        );
        assert!(matches!(window_demean(&[0.0; 4], 1, 4), Err(Error::Range(_))));
    }

    #[test]
    fn autocorr_examples() {
        let s = sine(20.0, 200, 0.3);
        assert!((autocorr(&s, 5, 0, 60).unwrap() - 1.0).abs() < 1e-12);
        assert!((autocorr(&s, 5, 20, 60).unwrap() - 1.0).abs() < 1e-9);
        assert!((autocorr(&s, 5, 10, 60).unwrap() + 1.0).abs() < 1e-9);
    }

    #[test]
    fn autocorr_constant_window_is_undefined() {
        let s = vec![2.0; 50];
        assert!(matches!(autocorr(&s, 0, 5, 10), Err(Error::UndefinedCorrelation(_))));
    }

    #[test]
    fn harmonic_sum_of_periodic_signal() {
        let s = sine(20.0, 400, 0.0);
        let p = EstimatorParams {
            window_len: 100,
            harmonics: 3,
            decay: 2.0,
            ..EstimatorParams::default()
        };
        let v = harmonic_sum(&s, 0, 20, &p).unwrap();
        assert!((v - 1.197_540_261_032_505_7).abs() < 1e-9, "{v}");
    }

    #[test]
    fn harmonic_sum_penalises_half_period() {
        let s = sine(40.0, 600, 0.7);
        let p = EstimatorParams {
            window_len: 200,
            harmonics: 4,
            ..EstimatorParams::default()
        };
        let full = harmonic_sum(&s, 0, 40, &p).unwrap();
        let half = harmonic_sum(&s, 0, 20, &p).unwrap();
        // ρ0 alternates -1, +1, -1, +1 at multiples of P/2
        let w: Vec<f64> = (1..=4).map(|l| p.harmonic_weight(l)).collect();
        let expect_half = -w[0] + w[1] - w[2] + w[3];
        assert!((half - expect_half).abs() < 1e-9);
        assert!(full > half + 1.0);
    }

    #[test]
    fn harmonic_sum_single_harmonic_is_scaled_rho0() {
        let s: Vec<f64> = (0..300).map(|k| ((k * k) as f64 * 0.013).sin() + (k as f64 * 0.2).cos()).collect();
        let p = EstimatorParams {
            window_len: 100,
            harmonics: 1,
            ..EstimatorParams::default()
        };
        let mut best_h = (0, f64::MIN);
        let mut best_r = (0, f64::MIN);
        for lag in 10..=100 {
            let h = harmonic_sum(&s, 0, lag, &p).unwrap();
            let r = autocorr(&s, 0, lag, 100).unwrap();
            assert!((h - r * (-0.5f64).exp()).abs() < 1e-15);
            if h >= best_h.1 {
                best_h = (lag, h);
            }
            if r >= best_r.1 {
                best_r = (lag, r);
            }
        }
        assert_eq!(best_h.0, best_r.0);
    }

    #[test]
    fn harmonic_sum_skips_harmonics_past_end() {
        let s = sine(20.0, 150, 0.0);
        let p = EstimatorParams {
            window_len: 100,
            harmonics: 4,
            ..EstimatorParams::default()
        };
        // only ℓ = 1, 2 fit (100 + 2·20 <= 150 < 100 + 3·20)
        let v = harmonic_sum(&s, 0, 20, &p).unwrap();
        let want = p.harmonic_weight(1) + p.harmonic_weight(2);
        assert!((v - want).abs() < 1e-9);
        assert!(matches!(harmonic_sum(&s, 0, 60, &p), Err(Error::Range(_))));
    }

    #[test]
    fn interval_rate_conversion() {
        assert_eq!(interval_to_rate(2.0).unwrap(), 30.0);
        assert_eq!(interval_to_rate(1.0).unwrap(), 60.0);
        assert!((interval_to_rate(1.26).unwrap() - 47.619_047_619_047_62).abs() < 1e-12);
        assert!(interval_to_rate(0.0).is_err());
        assert!(interval_to_rate(-1.0).is_err());
    }

    #[test]
    fn motion_gate_examples() {
        let breathing: Vec<f64> = sine(40.0, 300, 0.0).iter().map(|v| 0.0005 * v).collect();
        assert!(!motion_gate(&breathing, 0.005));
        let mut step = vec![0.0; 100];
        step.extend(vec![0.02; 100]);
        assert!(motion_gate(&step, 0.005));
        assert!(!motion_gate(&[0.0, 0.005], 0.005));
    }

    #[test]
    fn pure_sinusoid_two_seconds() {
        let s: Vec<f64> = sine(40.0, 1200, 0.4).iter().map(|v| v * 5e-4).collect();
        let est = estimate_interval(&trace(s, 0.05), 0, &EstimatorParams::default()).unwrap();
        assert!((est.tau_hat_s - 2.0).abs() <= 0.025, "{est:?}");
        assert!((est.rate_bpm - 60.0 / est.tau_hat_s).abs() < 1e-12);
        assert!(!est.motion_flag);
        assert_eq!(est.effective_harmonics, 4);
        assert!(est.peak_corr > 0.99);
    }

    #[test]
    fn constant_displacement_is_skipped() {
        let t = trace(vec![0.001; 1200], 0.05);
        let err = estimate_interval(&t, 0, &EstimatorParams::default()).unwrap_err();
        assert!(matches!(err, Error::UndefinedCorrelation(_)));
        let series = sliding_series(&t, &EstimatorParams::default()).unwrap();
        assert!(series.estimates.is_empty());
        assert!(!series.gaps.is_empty());
        assert!(series.gaps[0].reason.contains("constant"));
    }

    #[test]
    fn short_trace_is_empty_series_error() {
        let t = trace(sine(40.0, 200, 0.0), 0.05);
        assert!(matches!(
            sliding_series(&t, &EstimatorParams::default()),
            Err(Error::EmptySeries(_))
        ));
    }

    #[test]
    fn sliding_count_and_ordering() {
        // 120 s at 20 Hz; windows need 300 + 100 samples
        let t = trace(sine(50.0, 2400, 0.0), 0.05);
        let s = sliding_series(&t, &EstimatorParams::default()).unwrap();
        assert_eq!(s.estimates.len(), 101);
        assert!(s.gaps.is_empty());
        assert!(s.estimates.windows(2).all(|w| w[1].t_s > w[0].t_s));
        // harmonics are dropped towards the end of the trace
        assert_eq!(s.estimates[0].effective_harmonics, 4);
        assert_eq!(s.estimates.last().unwrap().effective_harmonics, 1);
    }

    #[test]
    fn params_validation() {
        let dt = 0.05;
        assert!(EstimatorParams::default().validate(dt).is_ok());
        let p = EstimatorParams {
            window_len: 50,
            ..EstimatorParams::default()
        };
        assert!(p.validate(dt).is_err());
        let p = EstimatorParams {
            tau_min_s: 3.0,
            tau_max_s: 2.0,
            ..EstimatorParams::default()
        };
        assert!(p.validate(dt).is_err());
        let p = EstimatorParams {
            harmonics: 0,
            ..EstimatorParams::default()
        };
        assert!(p.validate(dt).is_err());
        assert_eq!(EstimatorParams::default().lag_bounds(dt), (10, 100));
        assert_eq!(
            EstimatorParams::default().with_window_s(20.0, dt).window_len,
            400
        );
    }

    #[test]
    fn csv_round_trip_with_gaps() {
        let series = RespirationSeries {
            estimates: vec![
                RespirationEstimate {
                    t_s: 0.0,
                    tau_hat_s: 2.0,
                    rate_bpm: 30.0,
                    peak_corr: 0.9,
                    motion_flag: false,
                    effective_harmonics: 4,
                },
                RespirationEstimate {
                    t_s: 2.0,
                    tau_hat_s: 2.5,
                    rate_bpm: 24.0,
                    peak_corr: 0.5,
                    motion_flag: true,
                    effective_harmonics: 3,
                },
            ],
            gaps: vec![Gap {
                t_s: 1.0,
                reason: "x".into(),
            }],
            params: None,
        };
        let mut buf = Vec::new();
        series.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("t_s,tau_hat_s,rate_bpm,peak_corr,motion_flag,effective_L\n"));
        assert!(text.contains("1.0,NaN,NaN,NaN,false,0"));
        let back = RespirationSeries::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back.estimates, series.estimates);
        assert_eq!(back.gaps.len(), 1);
        assert_eq!(back.usable().count(), 1);
    }
}
