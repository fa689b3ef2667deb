//! Cube to respiration series: image a short span, localise the breathing
//! target, then extract the full-length beam at that bin.

use serde::{Deserialize, Serialize};

use crate::beamformer::{beam_series, form_image_frames, localize_target, AngleGrid, TargetLocation};
use crate::cube::IqCube;
use crate::displacement::{displacement_from_beam, DisplacementTrace};
use crate::error::{Error, Result};
use crate::respiration::{sliding_series, EstimatorParams, RespirationSeries};
use crate::taylor::{taylor_weights, DEFAULT_NBAR, DEFAULT_SIDELOBE_DB};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TaperParams {
    pub nbar: usize,
    pub sidelobe_db: f64,
}

impl Default for TaperParams {
    fn default() -> Self {
        Self {
            nbar: DEFAULT_NBAR,
            sidelobe_db: DEFAULT_SIDELOBE_DB,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ProcessingOptions {
    pub grid: AngleGrid,
    pub taper: TaperParams,
    /// Slow-time span, from the start of the cube, used for localisation.
    pub localization_span_s: f64,
    pub estimator: EstimatorParams,
}

impl Default for ProcessingOptions {
    fn default() -> Self {
        Self {
            grid: AngleGrid::default(),
            taper: TaperParams::default(),
            localization_span_s: 20.0,
            estimator: EstimatorParams::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ProcessedRadar {
    pub location: TargetLocation,
    pub trace: DisplacementTrace,
    pub series: RespirationSeries,
}

fn span_frames(cube: &IqCube, span_s: f64) -> Result<usize> {
    if !(span_s.is_finite() && span_s > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "localisation span must be positive, got {span_s}"
        )));
    }
    let frames = ((span_s / cube.config().frame_interval_s).round() as usize).min(cube.n_frames());
    if frames == 0 {
        return Err(Error::EmptySeries("cube has no frames".into()));
    }
    Ok(frames)
}

pub fn locate(cube: &IqCube, opts: &ProcessingOptions) -> Result<TargetLocation> {
    let frames = span_frames(cube, opts.localization_span_s)?;
    let weights = taylor_weights(cube.n_elements(), opts.taper.nbar, opts.taper.sidelobe_db)?;
    let image = form_image_frames(cube, 0..frames, &opts.grid, &weights)?;
    localize_target(&image, 0..frames)
}

pub fn extract_displacement(cube: &IqCube, location: &TargetLocation, opts: &ProcessingOptions) -> Result<DisplacementTrace> {
    let weights = taylor_weights(cube.n_elements(), opts.taper.nbar, opts.taper.sidelobe_db)?;
    let beam = beam_series(cube, location.range_bin, location.theta_rad, &weights)?;
    displacement_from_beam(&beam, cube.config(), cube.start_time_s(), Some(*location))
}

pub fn process_cube(cube: &IqCube, opts: &ProcessingOptions) -> Result<ProcessedRadar> {
    let location = locate(cube, opts)?;
    let trace = extract_displacement(cube, &location, opts)?;
    let series = sliding_series(&trace, &opts.estimator)?;
    Ok(ProcessedRadar {
        location,
        trace,
        series,
    })
}
