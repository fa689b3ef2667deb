use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::settings::{EstimatorArgs, ImagingArgs};

/// Respiration monitoring with a MIMO FMCW radar: scene simulation, target
/// localisation, interval estimation and dual-radar evaluation.
///
/// Exit codes: 0 success, 1 estimation failure, 2 I/O error, 3 malformed
/// input, 4 invalid parameters. Errors are reported on stderr as a JSON
/// object with `error`, `message` and, where relevant, `path`.
#[derive(Debug, Parser)]
#[command(name = "breathradar", version)]
pub struct Cli {
    /// Seed for simulated noise.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// JSON settings file (radar, processing, exclude_pct, pair_tolerance_s, seed).
    #[arg(long, global = true, value_name = "JSON")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Synthesise IQ cubes and ground-truth sidecars from a scene description.
    Simulate(SimulateArgs),
    /// Find the breathing target in a cube and print its location as JSON.
    Localize(LocalizeArgs),
    /// Extract displacement and estimate respiratory intervals from a cube.
    Estimate(EstimateArgs),
    /// Compare two respiration series minute by minute.
    Evaluate(EvaluateArgs),
    /// Simulate, estimate and evaluate a dual-radar scene in one go.
    Pipeline(PipelineArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Scene JSON: a single scene, or an object with a `dual_radar` key.
    #[arg(long, required_unless_present = "bundled")]
    pub scene: Option<PathBuf>,
    /// Use the built-in 18-minute dual-radar scene.
    #[arg(long, conflicts_with = "scene")]
    pub bundled: bool,
    /// Output cube path; give two for a dual-radar scene.
    #[arg(long, required = true, num_args = 1..=2)]
    pub out: Vec<PathBuf>,
    /// Ground-truth CSV path for a single scene (default: next to the cube).
    #[arg(long)]
    pub truth: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LocalizeArgs {
    /// Input cube (RIQ1).
    #[arg(long)]
    pub cube: PathBuf,
    /// Write the location JSON here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub imaging: ImagingArgs,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// Input cube (RIQ1).
    #[arg(long)]
    pub cube: PathBuf,
    /// Respiration series CSV.
    #[arg(long)]
    pub out: PathBuf,
    /// Reuse a location written by `localize` instead of searching.
    #[arg(long)]
    pub location: Option<PathBuf>,
    /// Also write the displacement trace (time_s, displacement_m).
    #[arg(long)]
    pub dump_displacement: Option<PathBuf>,
    /// Also write per-minute averages of the series.
    #[arg(long)]
    pub minutes: Option<PathBuf>,
    #[command(flatten)]
    pub imaging: ImagingArgs,
    #[command(flatten)]
    pub estimator: EstimatorArgs,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Reference series CSV (radar 1).
    #[arg(long)]
    pub a: PathBuf,
    /// Second series CSV (radar 2).
    #[arg(long)]
    pub b: PathBuf,
    /// Report path; `.csv` or `.json` selects the format unless --format is given.
    #[arg(long)]
    pub out: PathBuf,
    /// Report format: csv or json.
    #[arg(long)]
    pub format: Option<String>,
    /// Exclude minutes whose rate RMS error exceeds this percentage of the mean rate.
    #[arg(long)]
    pub exclude_pct: Option<f64>,
    /// Largest timestamp difference, in seconds, for two estimates to be paired.
    #[arg(long)]
    pub tolerance_s: Option<f64>,
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    /// Directory receiving every artefact.
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Dual-radar scene JSON (default: the built-in scene).
    #[arg(long, conflicts_with = "cubes")]
    pub scene: Option<PathBuf>,
    /// Process two existing cubes instead of simulating.
    #[arg(long, num_args = 2)]
    pub cubes: Option<Vec<PathBuf>>,
    /// Exclude minutes whose rate RMS error exceeds this percentage of the mean rate.
    #[arg(long)]
    pub exclude_pct: Option<f64>,
    #[command(flatten)]
    pub imaging: ImagingArgs,
    #[command(flatten)]
    pub estimator: EstimatorArgs,
}
