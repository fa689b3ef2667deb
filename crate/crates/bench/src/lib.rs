//! Fixtures shared by the benchmarks.

use std::f64::consts::TAU;

use breathradar::{DisplacementTrace, DualRadarSetup, IqCube, RadarConfig, Scene};

/// Radar 1 of the built-in dual scene, cut to `duration_s`.
pub fn bundled_scene(duration_s: f64) -> (RadarConfig, Scene) {
    let cfg = RadarConfig::default();
    let mut setup = DualRadarSetup::bundled(&cfg);
    setup.duration_s = duration_s;
    (cfg, setup.scene(0))
}

pub fn bundled_cube(duration_s: f64) -> IqCube {
    let (cfg, scene) = bundled_scene(duration_s);
    breathradar::synthesize_cube(&scene, &cfg, 1).expect("bundled scene is valid")
}

/// Two-harmonic breathing at `period_s`, sampled every 50 ms.
pub fn breathing_trace(n: usize, period_s: f64) -> DisplacementTrace {
    let samples = (0..n)
        .map(|k| {
            let t = k as f64 * 0.05;
            0.5e-3 * ((TAU * t / period_s).sin() + 0.2 * (2.0 * TAU * t / period_s).sin())
        })
        .collect();
    DisplacementTrace::new(samples, 0.05, 0.0)
}
