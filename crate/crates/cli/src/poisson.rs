use std::fmt::Write as _;

use hpla_core::fem::{self, AccuracyRow, PrecisionMode, SolveOptions};
use hpla_core::solvers::StopReason;
use hpla_core::Backend;

use crate::{CliError, CliResult};

pub const MAX_CLIENT_LEVEL: usize = 10;
/// First level of the accuracy table.
pub const FIRST_TABLE_LEVEL: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoissonArgs {
    pub level: usize,
    pub precision: PrecisionMode,
    pub tol: f64,
}

#[derive(Debug)]
pub struct PoissonReport {
    pub precision: PrecisionMode,
    pub rows: Vec<AccuracyRow>,
}

impl PoissonReport {
    /// Level, L2 error and reduction, one row per level.
    pub fn table(&self) -> String {
        let mut out = format!("# precision: {}\n{:>5} {:>12} {:>8}\n", self.precision, "level", "error", "red.");
        for r in &self.rows {
            let red = r.reduction.map_or_else(|| "-".to_string(), |x| format!("{x:.2}"));
            let _ = writeln!(out, "{:>5} {:>12.5e} {:>8}", r.level, r.error, red);
        }
        out
    }

    pub fn solver_summary(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            let rep = &r.report;
            let _ = writeln!(
                out,
                "level {}: {} unknowns, {} iterations, {:?}, residual {:.3e} -> {:.3e}, {:.3} s",
                r.level,
                r.unknowns,
                rep.iterations,
                rep.stop,
                rep.initial_residual(),
                rep.final_residual(),
                rep.wall_time
            );
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("level,unknowns,error,reduction,iterations,stop\n");
        for r in &self.rows {
            let red = r.reduction.map_or_else(String::new, |x| x.to_string());
            let _ = writeln!(out, "{},{},{},{},{},{:?}", r.level, r.unknowns, r.error, red, r.report.iterations, r.report.stop);
        }
        out
    }
}

/// Solves the polynomial test problem on levels 2 through `args.level` and
/// collects the accuracy table.
///
/// Hitting the iteration limit is an error. A single-precision solve that
/// stagnates at its rounding floor counts as finished.
pub fn poisson_client(be: &Backend, args: &PoissonArgs) -> CliResult<PoissonReport> {
    if !(FIRST_TABLE_LEVEL..=MAX_CLIENT_LEVEL).contains(&args.level) {
        return Err(CliError::Usage(format!(
            "level must be between {FIRST_TABLE_LEVEL} and {MAX_CLIENT_LEVEL}, got {}",
            args.level
        )));
    }
    let opts = SolveOptions {
        tol: args.tol,
        ..SolveOptions::default()
    };
    let rows = fem::accuracy_study(be, FIRST_TABLE_LEVEL..=args.level, args.precision, &opts)?;
    for r in &rows {
        let finished = match r.report.stop {
            StopReason::Converged => true,
            StopReason::Stagnated => args.precision == PrecisionMode::Single,
            StopReason::MaxIterations => false,
        };
        if !finished {
            return Err(CliError::NotConverged {
                level: r.level,
                iterations: r.report.iterations,
            });
        }
    }
    Ok(PoissonReport {
        precision: args.precision,
        rows,
    })
}
