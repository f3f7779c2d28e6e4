use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use hpla_core::swe::{make_scenario, run_simulation, PrecisionConfig, ScenarioKind, SimulationReport, SweParams};
use hpla_core::Backend;
use log::info;

use crate::output::{write_height_field, FieldFormat};
use crate::{io_error, CliError, CliResult};

#[derive(Debug, Clone, PartialEq)]
pub struct SweArgs {
    pub scenario: ScenarioKind,
    pub grid: usize,
    pub steps: usize,
    pub config: PrecisionConfig,
    /// Time step; the scenario default when `None`.
    pub dt: Option<f64>,
    pub out_dir: PathBuf,
    pub snapshot_every: Option<usize>,
    pub snapshot_format: FieldFormat,
}

#[derive(Debug)]
pub struct SweSummary {
    pub report: SimulationReport,
    pub volume_csv: PathBuf,
    pub snapshots: Vec<PathBuf>,
}

pub const VOLUME_FILE: &str = "volume.csv";

pub fn volume_csv(report: &SimulationReport) -> String {
    let mut out = String::from("step,time,rel_vol_err\n");
    for s in &report.samples {
        let _ = writeln!(out, "{},{},{}", s.step, s.time, s.rel_vol_err);
    }
    out
}

pub fn snapshot_path(dir: &Path, step: usize, format: FieldFormat) -> PathBuf {
    dir.join(format!("height_{step:06}.{}", format.extension()))
}

/// Runs a scenario and writes `volume.csv` plus the requested height-field
/// snapshots into `args.out_dir`, creating it if needed.
///
/// A state that stops being finite aborts the run with
/// [`hpla_core::Error::NonFinite`], which names the step.
pub fn swe_client(be: &Backend, args: &SweArgs) -> CliResult<SweSummary> {
    if args.snapshot_every == Some(0) {
        return Err(CliError::Usage("snapshot interval must be positive".into()));
    }
    let params = SweParams {
        dt: args.dt.unwrap_or_else(|| args.scenario.default_dt()),
        ..SweParams::default()
    };
    let initial = make_scenario(args.scenario, args.grid, &params)?;
    fs::create_dir_all(&args.out_dir).map_err(io_error(&args.out_dir))?;

    let mut snapshots = Vec::new();
    let mut write_error = None;
    let mut on_snapshot = |step: usize, state: &hpla_core::swe::SweState<f64>| {
        let path = snapshot_path(&args.out_dir, step, args.snapshot_format);
        match write_height_field(state, &path, args.snapshot_format) {
            Ok(()) => snapshots.push(path),
            Err(e) => {
                if write_error.is_none() {
                    write_error = Some(e);
                }
            }
        }
        Ok(())
    };
    let report = run_simulation(be, &initial, &params, args.steps, args.config, args.snapshot_every, &mut on_snapshot)?;
    if let Some(e) = write_error {
        return Err(e);
    }
    let volume = args.out_dir.join(VOLUME_FILE);
    fs::write(&volume, volume_csv(&report)).map_err(io_error(&volume))?;
    info!(
        "{} m={} {}: {} steps in {:.2} s, final volume error {:e}",
        args.scenario,
        args.grid,
        args.config,
        args.steps,
        report.wall_time.as_secs_f64(),
        report.final_volume_error()
    );
    Ok(SweSummary {
        report,
        volume_csv: volume,
        snapshots,
    })
}
