mod config;
mod output;

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use config::{ConfigError, RunConfig};

/// Local work and heat in driven and coupled quantum systems.
#[derive(Debug, Parser)]
#[command(name = "lembas", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one scenario and write its trajectory as CSV.
    Run {
        config: PathBuf,
        /// Output path; overrides the config's `output`. Defaults to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep one parameter and write work, heat and efficiency per value.
    Sweep {
        config: PathBuf,
        #[arg(long)]
        param: String,
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        #[arg(long)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the acceptance checks.
    Verify,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("config error at {0}")]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Usage(String),
    #[error("cannot write output: {0}")]
    Io(#[from] io::Error),
    #[error("numerical error: {0}")]
    Numerical(lembas::Error),
    #[error("{0} check(s) failed")]
    VerifyFailed(usize),
}

impl From<lembas::Error> for CliError {
    fn from(e: lembas::Error) -> Self {
        match e {
            lembas::Error::InvalidInput(_) | lembas::Error::DimensionMismatch { .. } => CliError::Usage(e.to_string()),
            other => CliError::Numerical(other),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(io::Error::other(e))
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::VerifyFailed(_) => 1,
            CliError::Config(_) | CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

fn open_output(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(io::BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn cmd_run(config: &Path, out: Option<PathBuf>) -> Result<(), CliError> {
    let cfg = RunConfig::load(config)?;
    let trajectory = cfg.run()?;
    let target = out.or(cfg.output.clone());
    output::write_trajectory(open_output(target.as_deref())?, &trajectory)?;
    Ok(())
}

fn sweep_values(from: f64, to: f64, points: usize) -> Vec<f64> {
    match points {
        1 => vec![from],
        n => (0..n).map(|k| from + (to - from) * k as f64 / (n - 1) as f64).collect(),
    }
}

fn cmd_sweep(config: &Path, param: &str, from: f64, to: f64, points: usize, out: Option<PathBuf>) -> Result<(), CliError> {
    if points == 0 {
        return Err(CliError::Usage("--points must be at least 1".into()));
    }
    let base = RunConfig::load(config)?;
    let configs = sweep_values(from, to, points)
        .into_iter()
        .map(|v| base.with_parameter(param, v).map(|c| (v, c)))
        .collect::<Result<Vec<_>, _>>()?;
    let rows = configs
        .par_iter()
        .map(|(v, cfg)| -> Result<output::SweepRow, CliError> {
            let traj = cfg.run()?;
            Ok(output::SweepRow {
                value: *v,
                w_total: traj.work_total(),
                q_total: traj.heat_total(),
                eta: cfg.efficiency()?,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    output::write_sweep(open_output(out.as_deref())?, param, &rows)?;
    Ok(())
}

fn cmd_verify() -> Result<(), CliError> {
    let results = lembas::verify::run_all();
    let mut stdout = io::stdout().lock();
    for r in &results {
        writeln!(stdout, "{}", r.report_line())?;
    }
    for r in &results {
        writeln!(stdout, "{}", r.summary_line())?;
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    writeln!(stdout, "summary passed={} failed={}", results.len() - failed, failed)?;
    if failed > 0 {
        return Err(CliError::VerifyFailed(failed));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, out } => cmd_run(&config, out),
        Command::Sweep {
            config,
            param,
            from,
            to,
            points,
            out,
        } => cmd_sweep(&config, &param, from, to, points, out),
        Command::Verify => cmd_verify(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("lembas: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
