//! Executes a validated run configuration and writes its artifacts.

use std::fs;
use std::path::{Path, PathBuf};

use optomech_core::{
    analysis, evolve, figure_preset, initial_covariance, routh_hurwitz, steady_state_covariance,
    Axis, PhysicalConstants, SweepRow, SweepSpec, SweepTable, SystemParams, WignerGridSpec,
};

use crate::config::{Mode, ParamSource, RunConfig};
use crate::error::CliError;
use crate::output;

/// Completed run: resolved parameters and the files written.
#[derive(Debug)]
pub struct RunOutcome {
    pub params: SystemParams,
    pub artifacts: Vec<PathBuf>,
}

/// Built-in verification grid for `mode = check`, matching the
/// analytic-versus-numeric agreement bound.
const CHECK_GRID: usize = 40;
const CHECK_TOLERANCE_DB: f64 = 0.1;

pub fn run(config: &RunConfig) -> Result<RunOutcome, CliError> {
    let params = resolve_params(&config.params)?;
    fs::create_dir_all(&config.out_dir)?;

    let mut writer = ArtifactWriter {
        dir: config.out_dir.clone(),
        artifacts: Vec::new(),
    };

    let mut sweep_spec_echo: Option<SweepSpec> = None;
    match config.mode {
        Mode::Steady => {
            let report = analysis::squeezing_report(&params)?;
            writer.write("squeezing.json", &output::to_json_string(&report)?)?;
            let v = steady_state_covariance(&params)?;
            writer.write("covariance.csv", &output::covariance_csv(&v))?;
        }
        Mode::Evolve => {
            let options = config.evolve.as_ref().expect("validated evolve options");
            let v0 = initial_covariance(params.n_th)?;
            let trajectory = evolve(
                &params,
                &v0,
                options.t_end,
                options.dt,
                options.rwa,
                options.sample_every,
            )?;
            writer.write("trajectory.csv", &output::trajectory_csv(&trajectory))?;
        }
        Mode::Sweep => {
            let options = config.sweep.as_ref().expect("validated sweep options");
            let mut spec = figure_preset(&options.preset)?;
            spec.base = params;
            retune_theta_axis(&mut spec, options.theta_points);
            let table = run_sweep_parallel(&spec)?;
            writer.write("sweep.csv", &output::sweep_csv(&table))?;
            sweep_spec_echo = Some(table.spec.clone());
        }
        Mode::Wigner => {
            let options = config.wigner.as_ref().expect("validated wigner options");
            let v = steady_state_covariance(&params)?;
            let spec = WignerGridSpec {
                q_range: options.q_min.zip(options.q_max),
                p_range: options.p_min.zip(options.p_max),
                points: options.points,
            };
            let grid = analysis::wigner(&v, options.block, &spec)?;
            writer.write("wigner.csv", &output::wigner_csv(&grid))?;
        }
        Mode::Stability => {
            let report = routh_hurwitz(&params)?;
            writer.write("stability.json", &output::to_json_string(&report)?)?;
        }
        Mode::Check => {
            let report = run_check(&params)?;
            writer.write("check.json", &output::json_12sig(&report.to_json()))?;
            if !report.pass {
                write_provenance(&mut writer, config, &params, sweep_spec_echo.as_ref())?;
                return Err(CliError::numerical(format!(
                    "verification grid exceeded the {CHECK_TOLERANCE_DB} dB bound \
                     (worst {:.4} dB at gain {:.6}, ratio {:.4})",
                    report.max_abs_diff_db, report.worst_gain, report.worst_ratio
                )));
            }
        }
    }

    write_provenance(&mut writer, config, &params, sweep_spec_echo.as_ref())?;
    Ok(RunOutcome {
        params,
        artifacts: writer.artifacts,
    })
}

fn resolve_params(source: &ParamSource) -> Result<SystemParams, CliError> {
    match source {
        ParamSource::Dimensionless(sp) => Ok(*sp),
        ParamSource::Physical(pp) => {
            let (sp, _steady) = SystemParams::from_physical(pp, &PhysicalConstants::si())?;
            Ok(sp)
        }
    }
}

struct ArtifactWriter {
    dir: PathBuf,
    artifacts: Vec<PathBuf>,
}

impl ArtifactWriter {
    fn write(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        let path = self.dir.join(name);
        if contents.ends_with('\n') {
            fs::write(&path, contents)?;
        } else {
            fs::write(&path, format!("{contents}\n"))?;
        }
        self.artifacts.push(path);
        Ok(())
    }
}

fn write_provenance(
    writer: &mut ArtifactWriter,
    config: &RunConfig,
    params: &SystemParams,
    sweep_spec: Option<&SweepSpec>,
) -> Result<(), CliError> {
    let mut obj = serde_json::Map::new();
    obj.insert(
        "mode".into(),
        serde_json::Value::String(config.mode.as_str().into()),
    );
    obj.insert(
        "code_version".into(),
        serde_json::Value::String(env!("CARGO_PKG_VERSION").into()),
    );
    obj.insert("params".into(), serde_json::to_value(params)?);
    if let ParamSource::Physical(pp) = &config.params {
        obj.insert("physical".into(), serde_json::to_value(pp)?);
    }
    if let Some(options) = &config.evolve {
        obj.insert("evolve".into(), serde_json::to_value(options)?);
    }
    if let Some(options) = &config.sweep {
        obj.insert("sweep".into(), serde_json::to_value(options)?);
    }
    if let Some(options) = &config.wigner {
        obj.insert("wigner".into(), serde_json::to_value(options)?);
    }
    if let Some(spec) = sweep_spec {
        obj.insert("sweep_spec".into(), serde_json::to_value(spec)?);
    }
    let names: Vec<serde_json::Value> = writer
        .artifacts
        .iter()
        .filter_map(|p| p.file_name())
        .map(|n| serde_json::Value::String(n.to_string_lossy().into_owned()))
        .collect();
    obj.insert("artifacts".into(), serde_json::Value::Array(names));
    writer.write(
        "provenance.json",
        &output::json_12sig(&serde_json::Value::Object(obj)),
    )
}

/// Replaces the phase axis with `n` uniform samples over `[0, pi]`.
fn retune_theta_axis(spec: &mut SweepSpec, n: usize) {
    for (axis, values) in &mut spec.axes {
        if *axis == Axis::Theta && values.len() != n {
            let step = core::f64::consts::PI / (n - 1) as f64;
            *values = (0..n).map(|i| i as f64 * step).collect();
        }
    }
}

/// Evaluates a sweep across worker threads, partitioned by row range and
/// merged back in grid order; output is bit-identical to the serial path.
pub fn run_sweep_parallel(spec: &SweepSpec) -> Result<SweepTable, CliError> {
    // Serial run validates the spec and provides the table skeleton shape.
    let total = spec.row_count();
    let workers = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(total.max(1));
    if workers <= 1 || total < 64 {
        return Ok(optomech_core::run_sweep(spec)?);
    }

    let chunk = total.div_ceil(workers);
    let mut results: Vec<Result<Vec<SweepRow>, optomech_core::Error>> = Vec::new();
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for w in 0..workers {
            let lo = w * chunk;
            let hi = ((w + 1) * chunk).min(total);
            if lo >= hi {
                break;
            }
            handles.push(scope.spawn(move || {
                (lo..hi)
                    .map(|flat| optomech_core::evaluate_point(spec, flat))
                    .collect::<Result<Vec<SweepRow>, _>>()
            }));
        }
        for handle in handles {
            results.push(handle.join().expect("sweep worker panicked"));
        }
    });

    let mut rows = Vec::with_capacity(total);
    for part in results {
        rows.extend(part?);
    }
    let mut columns: Vec<String> = spec
        .axes
        .iter()
        .map(|(axis, _)| axis.name().to_string())
        .collect();
    columns.extend(spec.outputs.iter().map(|c| c.name().to_string()));
    Ok(SweepTable {
        columns,
        rows,
        spec: spec.clone(),
        code_version: env!("CARGO_PKG_VERSION").to_string(),
    })
}

/// Result of the built-in numeric-versus-analytic verification grid.
pub struct CheckReport {
    pub points_total: usize,
    pub points_checked: usize,
    pub max_abs_diff_db: f64,
    pub worst_gain: f64,
    pub worst_ratio: f64,
    pub pass: bool,
}

impl CheckReport {
    fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "tolerance_db": CHECK_TOLERANCE_DB,
            "grid_points_per_axis": CHECK_GRID,
            "points_total": self.points_total,
            "points_checked": self.points_checked,
            "max_abs_diff_db": self.max_abs_diff_db,
            "worst_gain": self.worst_gain,
            "worst_ratio": self.worst_ratio,
            "pass": self.pass,
        })
    }
}

/// Sweeps gain over `[0, 0.45 kappa]` and the tone ratio over `[0, 0.95]`
/// around the supplied base parameters, comparing the stationary solve
/// against the closed form at every stable point.
fn run_check(base: &SystemParams) -> Result<CheckReport, CliError> {
    let mut report = CheckReport {
        points_total: CHECK_GRID * CHECK_GRID,
        points_checked: 0,
        max_abs_diff_db: 0.0,
        worst_gain: 0.0,
        worst_ratio: 0.0,
        pass: true,
    };
    for i in 0..CHECK_GRID {
        for j in 0..CHECK_GRID {
            let gain = 0.45 * base.kappa * i as f64 / (CHECK_GRID - 1) as f64;
            let ratio = 0.95 * j as f64 / (CHECK_GRID - 1) as f64;
            let sp = SystemParams {
                gain,
                g_plus: ratio * base.g_minus,
                ..*base
            }
            .validated()
            .map_err(CliError::from)?;
            let stability = routh_hurwitz(&sp)?;
            if !stability.eig_stable {
                continue;
            }
            let v = steady_state_covariance(&sp)?;
            let s_numeric = analysis::squeezing_db(v.variance_q())?;
            let s_analytic = analysis::analytic_squeezing_db(&sp)?;
            let diff = (s_numeric - s_analytic).abs();
            report.points_checked += 1;
            if diff > report.max_abs_diff_db {
                report.max_abs_diff_db = diff;
                report.worst_gain = gain;
                report.worst_ratio = ratio;
            }
        }
    }
    report.pass = report.max_abs_diff_db < CHECK_TOLERANCE_DB;
    Ok(report)
}

/// Convenience used by tests: full pipeline from config text to artifacts
/// rooted at `dir`.
pub fn run_config_text(text: &str, dir: &Path) -> Result<RunOutcome, CliError> {
    let mut config = crate::config::parse_config(text)?;
    config.out_dir = dir.to_path_buf();
    run(&config)
}
