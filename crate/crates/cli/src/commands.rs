use std::path::{Path, PathBuf};

use breathradar::evaluation::{series_minutes, write_series_minutes_csv};
use breathradar::pipeline::{extract_displacement, locate};
use breathradar::simulator::{ground_truth, write_truth_csv};
use breathradar::{
    dual_radar_scene, evaluate, pair_series, render_report, sliding_series, synthesize_cube,
    DisplacementTrace, DualRadarSetup, EvalReport, IqCube, ProcessingOptions, RadarConfig,
    ReportFormat, RespirationSeries, Scene, TargetLocation,
};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::cli::{EstimateArgs, EvaluateArgs, LocalizeArgs, PipelineArgs, SimulateArgs};
use crate::error::{CliError, CliResult};
use crate::files::{self, load_cube, read_json, save_cube, to_json, write_json, write_text, write_with};
use crate::settings::{EstimatorArgs, ImagingArgs, Settings};

/// Global inputs shared by every subcommand.
pub struct Context {
    pub settings: Settings,
    pub seed: u64,
}

impl Context {
    pub fn new(settings: Settings, seed: Option<u64>) -> Self {
        let seed = seed.or(settings.seed).unwrap_or(0);
        Self { settings, seed }
    }

    fn dual_seeds(&self) -> [u64; 2] {
        [self.seed, self.seed.wrapping_add(1)]
    }

    fn options(&self, imaging: &ImagingArgs) -> CliResult<ProcessingOptions> {
        let mut opts = self.settings.processing;
        imaging.apply(&mut opts)?;
        Ok(opts)
    }
}

#[derive(Deserialize)]
struct DualDocument {
    #[serde(default)]
    radar: Option<RadarConfig>,
    dual_radar: DualRadarSetup,
}

#[derive(Deserialize)]
struct SingleDocument {
    #[serde(default)]
    radar: Option<RadarConfig>,
    #[serde(flatten)]
    scene: Scene,
}

enum SceneDocument {
    Single(RadarConfig, Scene),
    Dual(RadarConfig, DualRadarSetup),
}

fn load_scene(path: &Path, ctx: &Context) -> CliResult<SceneDocument> {
    let value: Value = read_json(path)?;
    let fallback = ctx.settings.radar.unwrap_or_default();
    let parsed = if value.get("dual_radar").is_some() {
        serde_json::from_value::<DualDocument>(value)
            .map(|d| SceneDocument::Dual(d.radar.unwrap_or(fallback), d.dual_radar))
    } else {
        serde_json::from_value::<SingleDocument>(value)
            .map(|d| SceneDocument::Single(d.radar.unwrap_or(fallback), d.scene))
    };
    parsed.map_err(|e| CliError::from(e).at(path))
}

fn truth_path(cube_path: &Path) -> PathBuf {
    cube_path.with_extension("truth.csv")
}

#[derive(Serialize)]
struct CubeSummary {
    path: PathBuf,
    truth: PathBuf,
    n_frames: usize,
    n_elements: usize,
    n_ranges: usize,
    start_time_s: f64,
}

impl CubeSummary {
    fn new(path: &Path, truth: &Path, cube: &IqCube) -> Self {
        Self {
            path: path.to_path_buf(),
            truth: truth.to_path_buf(),
            n_frames: cube.n_frames(),
            n_elements: cube.n_elements(),
            n_ranges: cube.n_ranges(),
            start_time_s: cube.start_time_s(),
        }
    }
}

/// Synthesises both radars of `setup` and writes cubes plus truth sidecars.
fn simulate_dual(
    cfg: &RadarConfig,
    setup: &DualRadarSetup,
    seeds: [u64; 2],
    outs: [&Path; 2],
) -> CliResult<(Vec<IqCube>, Vec<CubeSummary>)> {
    let dual = dual_radar_scene(setup, cfg, seeds)?;
    let mut summaries = Vec::new();
    for (r, (cube, out)) in dual.cubes.iter().zip(outs).enumerate() {
        let truth = ground_truth(&setup.scene(r), cfg)?;
        let tpath = truth_path(out);
        save_cube(out, cube)?;
        write_with(&tpath, |w| write_truth_csv(&truth, w))?;
        summaries.push(CubeSummary::new(out, &tpath, cube));
    }
    Ok((dual.cubes.into_iter().collect(), summaries))
}

pub fn simulate(args: &SimulateArgs, ctx: &Context) -> CliResult<String> {
    let doc = match &args.scene {
        Some(path) => load_scene(path, ctx)?,
        None => {
            let cfg = ctx.settings.radar.unwrap_or_default();
            SceneDocument::Dual(cfg, DualRadarSetup::bundled(&cfg))
        }
    };
    let summaries = match doc {
        SceneDocument::Single(cfg, scene) => {
            let [out] = args.out.as_slice() else {
                return Err(CliError::params("a single scene takes exactly one --out path"));
            };
            let cube = synthesize_cube(&scene, &cfg, ctx.seed)?;
            let truth = ground_truth(&scene, &cfg)?;
            let tpath = args.truth.clone().unwrap_or_else(|| truth_path(out));
            save_cube(out, &cube)?;
            write_with(&tpath, |w| write_truth_csv(&truth, w))?;
            vec![CubeSummary::new(out, &tpath, &cube)]
        }
        SceneDocument::Dual(cfg, setup) => {
            let [a, b] = args.out.as_slice() else {
                return Err(CliError::params("a dual-radar scene takes two --out paths"));
            };
            if args.truth.is_some() {
                return Err(CliError::params(
                    "--truth applies to single scenes; dual sidecars sit next to each cube",
                ));
            }
            simulate_dual(&cfg, &setup, ctx.dual_seeds(), [a, b])?.1
        }
    };
    to_json(&serde_json::json!({ "cubes": summaries }))
}

pub fn localize(args: &LocalizeArgs, ctx: &Context) -> CliResult<String> {
    let cube = load_cube(&args.cube)?;
    let opts = ctx.options(&args.imaging)?;
    let loc = locate(&cube, &opts)?;
    match &args.out {
        Some(path) => {
            write_json(path, &loc)?;
            Ok(String::new())
        }
        None => to_json(&loc),
    }
}

#[derive(Serialize)]
struct EstimateSummary {
    location: TargetLocation,
    n_estimates: usize,
    n_motion_flagged: usize,
    n_gaps: usize,
    rms_amplitude_m: f64,
    phase_dropouts: usize,
    sanity_violations: usize,
}

impl EstimateSummary {
    fn new(location: TargetLocation, trace: &DisplacementTrace, series: &RespirationSeries) -> Self {
        Self {
            location,
            n_estimates: series.estimates.len(),
            n_motion_flagged: series.estimates.iter().filter(|e| e.motion_flag).count(),
            n_gaps: series.gaps.len(),
            rms_amplitude_m: trace.rms_amplitude(),
            phase_dropouts: trace.dropouts.len(),
            sanity_violations: trace.sanity_violations().len(),
        }
    }
}

struct Processed {
    location: TargetLocation,
    trace: DisplacementTrace,
    series: RespirationSeries,
}

fn process(
    cube: &IqCube,
    ctx: &Context,
    imaging: &ImagingArgs,
    estimator: &EstimatorArgs,
    location: Option<TargetLocation>,
) -> CliResult<Processed> {
    let mut opts = ctx.options(imaging)?;
    estimator.apply(&mut opts, cube.config().frame_interval_s)?;
    let location = match location {
        Some(l) => l,
        None => locate(cube, &opts)?,
    };
    let trace = extract_displacement(cube, &location, &opts)?;
    let series = sliding_series(&trace, &opts.estimator)?;
    Ok(Processed {
        location,
        trace,
        series,
    })
}

pub fn estimate(args: &EstimateArgs, ctx: &Context) -> CliResult<String> {
    let cube = load_cube(&args.cube)?;
    let location = args.location.as_deref().map(read_json::<TargetLocation>).transpose()?;
    let p = process(&cube, ctx, &args.imaging, &args.estimator, location)?;
    write_with(&args.out, |w| p.series.write_csv(w))?;
    if let Some(path) = &args.dump_displacement {
        write_with(path, |w| p.trace.write_csv(w))?;
    }
    if let Some(path) = &args.minutes {
        write_with(path, |w| write_series_minutes_csv(&series_minutes(&p.series), w))?;
    }
    to_json(&EstimateSummary::new(p.location, &p.trace, &p.series))
}

fn report_format(explicit: Option<&str>, out: &Path) -> CliResult<ReportFormat> {
    let name = match explicit {
        Some(f) => f.to_string(),
        None => out
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_string)
            .ok_or_else(|| CliError::params("cannot infer report format; pass --format csv|json"))?,
    };
    Ok(name.parse::<ReportFormat>()?)
}

fn load_series(path: &Path) -> CliResult<RespirationSeries> {
    RespirationSeries::read_csv(files::open(path)?).map_err(|e| CliError::from(e).at(path))
}

fn run_evaluation(
    a: &RespirationSeries,
    b: &RespirationSeries,
    tolerance_s: f64,
    exclude_pct: f64,
) -> CliResult<EvalReport> {
    if !(tolerance_s.is_finite() && tolerance_s >= 0.0) {
        return Err(CliError::params(format!("pairing tolerance must be non-negative, got {tolerance_s}")));
    }
    Ok(evaluate(&pair_series(a, b, tolerance_s)?, exclude_pct)?)
}

pub fn evaluate_cmd(args: &EvaluateArgs, ctx: &Context) -> CliResult<String> {
    let format = report_format(args.format.as_deref(), &args.out)?;
    let a = load_series(&args.a)?;
    let b = load_series(&args.b)?;
    let tolerance = args.tolerance_s.unwrap_or(ctx.settings.pair_tolerance_s());
    let report = run_evaluation(&a, &b, tolerance, args.exclude_pct.unwrap_or(ctx.settings.exclude_pct()))?;
    write_text(&args.out, &render_report(&report, format)?)?;
    to_json(&serde_json::json!({
        "rows": report.rows.len(),
        "excluded_minutes": report.excluded_minutes,
        "gap_minutes": report.gap_minutes,
        "overall": report.overall,
    }))
}

pub fn pipeline(args: &PipelineArgs, ctx: &Context) -> CliResult<String> {
    let dir = &args.out_dir;
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let cubes: Vec<IqCube> = match &args.cubes {
        Some(paths) => paths.iter().map(|p| load_cube(p)).collect::<CliResult<_>>()?,
        None => {
            let (cfg, setup) = match &args.scene {
                Some(path) => match load_scene(path, ctx)? {
                    SceneDocument::Dual(cfg, setup) => (cfg, setup),
                    SceneDocument::Single(..) => {
                        return Err(CliError::params("pipeline needs a dual-radar scene").at(path))
                    }
                },
                None => {
                    let cfg = ctx.settings.radar.unwrap_or_default();
                    (cfg, DualRadarSetup::bundled(&cfg))
                }
            };
            let outs = [dir.join("radar1.riq"), dir.join("radar2.riq")];
            simulate_dual(&cfg, &setup, ctx.dual_seeds(), [&outs[0], &outs[1]])?.0
        }
    };

    let mut radars = Vec::new();
    let mut summaries = Vec::new();
    for (r, cube) in cubes.iter().enumerate() {
        let stem = format!("radar{}", r + 1);
        let p = process(cube, ctx, &args.imaging, &args.estimator, None)?;
        write_json(&dir.join(format!("{stem}.location.json")), &p.location)?;
        write_with(&dir.join(format!("{stem}.displacement.csv")), |w| p.trace.write_csv(w))?;
        write_with(&dir.join(format!("{stem}.series.csv")), |w| p.series.write_csv(w))?;
        write_with(&dir.join(format!("{stem}.minutes.csv")), |w| {
            write_series_minutes_csv(&series_minutes(&p.series), w)
        })?;
        summaries.push(EstimateSummary::new(p.location, &p.trace, &p.series));
        radars.push(p.series);
    }

    let report = run_evaluation(
        &radars[0],
        &radars[1],
        ctx.settings.pair_tolerance_s(),
        args.exclude_pct.unwrap_or(ctx.settings.exclude_pct()),
    )?;
    write_text(&dir.join("report.csv"), &render_report(&report, ReportFormat::Csv)?)?;
    write_text(&dir.join("report.json"), &render_report(&report, ReportFormat::Json)?)?;
    let summary = to_json(&serde_json::json!({
        "radars": summaries,
        "rows": report.rows.len(),
        "excluded_minutes": report.excluded_minutes,
        "gap_minutes": report.gap_minutes,
        "overall": report.overall,
    }))?;
    write_text(&dir.join("summary.json"), &summary)?;
    Ok(summary)
}
