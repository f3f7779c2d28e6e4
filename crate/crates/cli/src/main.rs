use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use hpla_cli::{bench_axpy, make_backend, poisson_client, swe_client, CliError, FieldFormat, PoissonArgs, SweArgs};
use hpla_core::fem::PrecisionMode;
use hpla_core::swe::{PrecisionConfig, ScenarioKind};
use hpla_core::{BackendTag, Precision};

#[derive(Parser)]
#[command(name = "hpla", version, about = "Backend-tagged linear algebra clients")]
struct Cli {
    /// Runtime configuration file (defaults to $HONEI_CONFIG, then ./.hplarc).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Backend for all kernels: generic, blocked or parallel.
    #[arg(long, global = true)]
    backend: Option<BackendTag>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum StorageArg {
    Single,
    Double,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Pgm,
}

#[derive(Subcommand)]
enum Command {
    /// Times the axpy kernel and prints CSV.
    Bench {
        /// Vector lengths, ascending.
        #[arg(long, value_delimiter = ',', default_value = "1000,10000,100000,1000000")]
        sizes: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "generic,blocked,parallel")]
        backends: Vec<BackendTag>,
        #[arg(long, value_enum, default_value = "single")]
        precision: StorageArg,
        #[arg(long, default_value_t = 20)]
        reps: usize,
    },
    /// Solves the Poisson test problem and prints the accuracy table.
    Poisson {
        #[arg(long, default_value_t = 6)]
        level: usize,
        /// single, double or mixed.
        #[arg(long, default_value = "double")]
        precision: PrecisionMode,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Runs a shallow-water scenario.
    Swe {
        /// circular, partial, dry-bed or uniform.
        #[arg(long, default_value = "circular")]
        scenario: ScenarioKind,
        #[arg(long, default_value_t = 100)]
        grid: usize,
        #[arg(long, default_value_t = 500)]
        steps: usize,
        /// all-single, all-double, every-K-double or prediction-double.
        #[arg(long, default_value = "all-double")]
        precision: PrecisionConfig,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long, default_value = "swe-out")]
        out: PathBuf,
        #[arg(long)]
        snapshot_every: Option<usize>,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
    },
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let be = make_backend(cli.config.as_deref(), cli.backend).context("loading runtime configuration")?;
    match cli.command {
        Command::Bench {
            sizes,
            backends,
            precision,
            reps,
        } => {
            let precision = match precision {
                StorageArg::Single => Precision::Single,
                StorageArg::Double => Precision::Double,
            };
            let report = bench_axpy(&be, &sizes, &backends, precision, reps)?;
            print!("{}", report.to_csv());
        }
        Command::Poisson { level, precision, tol } => {
            let args = PoissonArgs { level, precision, tol };
            let report = poisson_client(&be, &args)?;
            print!("{}", report.table());
            eprint!("{}", report.solver_summary());
        }
        Command::Swe {
            scenario,
            grid,
            steps,
            precision,
            dt,
            out,
            snapshot_every,
            format,
        } => {
            let args = SweArgs {
                scenario,
                grid,
                steps,
                config: precision,
                dt,
                out_dir: out,
                snapshot_every,
                snapshot_format: match format {
                    FormatArg::Csv => FieldFormat::Csv,
                    FormatArg::Pgm => FieldFormat::Pgm,
                },
            };
            let summary = swe_client(&be, &args)?;
            let r = &summary.report;
            println!(
                "{} steps, final relative volume error {:e}, min depth {:e}, {:.2} s",
                steps,
                r.final_volume_error(),
                r.min_depth,
                r.wall_time.as_secs_f64()
            );
            println!("wrote {}", summary.volume_csv.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if let Some(CliError::NotConverged { .. }) = e.downcast_ref::<CliError>() {
                return ExitCode::from(2);
            }
            ExitCode::FAILURE
        }
    }
}
