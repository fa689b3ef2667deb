//! Millimetre-wave FMCW/MIMO radar respiration monitoring.
//!
//! The processing chain runs from range-compressed slow-time samples to
//! respiratory interval estimates:
//!
//! 1. [`beamformer`]: Taylor-tapered delay-and-sum imaging over the virtual
//!    array and localisation of the breathing target bin.
//! 2. [`displacement`]: phase of the target bin, unwrapped and scaled to
//!    body-surface displacement.
//! 3. [`respiration`]: windowed normalised autocorrelation with harmonic
//!    summation, argmax over the lag grid.
//!
//! [`simulator`] produces ground-truth cubes for one or two radars, and
//! [`evaluation`] compares two respiration series minute by minute.

pub mod beamformer;
pub mod config;
pub mod cube;
pub mod displacement;
pub mod error;
pub mod evaluation;
pub mod noise;
pub mod pipeline;
pub mod respiration;
pub mod simulator;
pub mod taylor;

pub use beamformer::{
    beam_series, form_image, form_image_frames, localize_target, steering_vector, AngleGrid,
    RadarImage, TargetLocation,
};
pub use config::{range_resolution, virtual_index, wavelength, RadarConfig, SPEED_OF_LIGHT};
pub use cube::{read_cube, write_cube, IqCube};
pub use displacement::{
    extract_phase, phase_to_displacement, unwrap_phase, DisplacementTrace, WrappedPhase,
};
pub use error::{Error, Result};
pub use evaluation::{
    evaluate, exclude_outliers, minute_stats, pair_series, render_report, EvalReport, MinuteRow,
    Pair, Pairing, ReportFormat,
};
pub use pipeline::{process_cube, ProcessedRadar, ProcessingOptions, TaperParams};
pub use respiration::{
    autocorr, estimate_interval, harmonic_sum, interval_to_rate, motion_gate, sliding_series,
    window_demean, EstimatorParams, RespirationEstimate, RespirationSeries,
};
pub use simulator::{
    breathing_waveform, dual_radar_scene, synthesize_cube, BreathingModel, DualRadarSetup,
    MotionBurst, Scene, SceneTarget,
};
pub use taylor::{taylor_weights, TaylorWeights};
