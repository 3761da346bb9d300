use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use resonance::cli::output;
use resonance::cli::{compare, solve, RawConfig, SweepConfig};
use resonance::error::{ResonanceError, Result};
use resonance::oracle::NewtonOptions;

/// Resonance poles of delta-shell barrier models: 1/n expansion against exact Newton roots.
#[derive(Parser)]
#[command(name = "resonance", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expansion pole, exact pole, relative error and decay rate per (n, branch).
    Solve(SweepArgs),
    /// Error of the 1/n expansion at K = 0..order, and of the fixed-order coupling expansion (winter only).
    Compare {
        #[command(flatten)]
        sweep: SweepArgs,
        /// Order in z of the fixed-order expansion.
        #[arg(long, default_value_t = 2)]
        z_order: usize,
    },
    /// Scatter plot of the poles in the complex k plane (poles.svg).
    Plot(SweepArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// Flat key = value config file; flags below override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// winter | double | triple
    #[arg(long)]
    model: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    z0: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    z_plus: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    z_minus: Option<String>,
    /// Level range, `a..b` or `a`.
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    order: Option<String>,
    /// Comma-separated subset of plus,minus (triple model).
    #[arg(long)]
    branches: Option<String>,
    /// Comma-separated subset of csv,json,svg.
    #[arg(long)]
    out: Option<String>,
    /// Output directory.
    #[arg(long)]
    path: Option<String>,
    #[arg(long)]
    tol: Option<String>,
    #[arg(long)]
    max_iter: Option<String>,
}

impl SweepArgs {
    fn build(&self) -> Result<SweepConfig> {
        let mut raw = match &self.config {
            Some(path) => RawConfig::parse(&fs::read_to_string(path)?)?,
            None => RawConfig::default(),
        };
        let overrides = [
            ("model", &self.model),
            ("z", &self.z),
            ("z0", &self.z0),
            ("z_plus", &self.z_plus),
            ("z_minus", &self.z_minus),
            ("n", &self.n),
            ("order", &self.order),
            ("branches", &self.branches),
            ("out", &self.out),
            ("path", &self.path),
            ("tol", &self.tol),
            ("max_iter", &self.max_iter),
        ];
        for (key, value) in overrides {
            if let Some(v) = value {
                raw.set(key, v);
            }
        }
        raw.build(NewtonOptions::from_env()?)
    }
}

fn report_written(paths: &[PathBuf]) {
    for p in paths {
        eprintln!("wrote {}", p.display());
    }
}

/// `Ok(true)` iff every row succeeded.
fn run(command: &Command) -> Result<bool> {
    match command {
        Command::Solve(args) => {
            let config = args.build()?;
            for w in config.model.validate()? {
                eprintln!("warning: {w}");
            }
            let report = solve(&config)?;
            print!("{}", output::solve_table(&report));
            report_written(&output::write_solve_outputs(&config, &report)?);
            Ok(report.all_ok())
        }
        Command::Compare { sweep, z_order } => {
            let config = sweep.build()?;
            let report = compare(&config, *z_order)?;
            print!("{}", output::compare_table(&report));
            report_written(&output::write_compare_outputs(&config, &report)?);
            Ok(report.failures.is_empty())
        }
        Command::Plot(args) => {
            let config = args.build()?;
            let report = solve(&config)?;
            for f in &report.failures {
                eprintln!("n={} {}: {}", f.n, f.branch, f.error);
            }
            let path = output::write_plot(&config, &report.records)?;
            report_written(&[path]);
            Ok(report.all_ok())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: some rows failed");
            ExitCode::from(1)
        }
        Err(e @ ResonanceError::Config(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
