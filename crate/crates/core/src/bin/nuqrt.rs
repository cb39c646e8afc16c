//! Command-line front end: `sweep`, `verify` and `params`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or configuration error.

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use nuqrt::sweep::{
    format_params, parse_config, run_sweep, verify, write_csv, ConfigInputs, SweepError,
};

const PARAMS_ENV: &str = "NU_QRT_PARAMS";

#[derive(Parser)]
#[command(name = "nuqrt", version, about = "Quantum-resource trade-offs in three-flavor neutrino oscillations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every point of an L/E sweep and emit CSV
    Sweep(SweepArgs),
    /// Sweep and check every invariant and bound at every point
    Verify(SweepArgs),
    /// Print the effective oscillation parameters
    Params(SweepArgs),
}

// Numeric flags stay strings here so that parse errors name the flag the same
// way config-file errors name the key.
#[derive(Args, Debug, Default)]
struct SweepArgs {
    /// Initial flavor: e or mu
    #[arg(long)]
    flavor: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    loe_min: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    loe_max: Option<String>,
    /// Number of grid points (>= 2)
    #[arg(long)]
    points: Option<String>,
    /// linear or log
    #[arg(long)]
    spacing: Option<String>,
    /// km_per_GeV or km_per_MeV
    #[arg(long)]
    units: Option<String>,
    /// CSV output path (stdout when omitted)
    #[arg(long)]
    output: Option<String>,
    /// Flat `key = value` config file
    #[arg(long)]
    config: Option<PathBuf>,

    /// Mixing angle θ12 in degrees
    #[arg(long, allow_hyphen_values = true)]
    theta12: Option<String>,
    /// Mixing angle θ23 in degrees
    #[arg(long, allow_hyphen_values = true)]
    theta23: Option<String>,
    /// Mixing angle θ13 in degrees
    #[arg(long, allow_hyphen_values = true)]
    theta13: Option<String>,
    /// Dirac CP phase in degrees
    #[arg(long, allow_hyphen_values = true)]
    delta_cp: Option<String>,
    /// Majorana phase α1 in degrees
    #[arg(long, allow_hyphen_values = true)]
    alpha1: Option<String>,
    /// Majorana phase α2 in degrees
    #[arg(long, allow_hyphen_values = true)]
    alpha2: Option<String>,
    /// Δm²21 in eV²
    #[arg(long, allow_hyphen_values = true)]
    dm21_sq: Option<String>,
    /// Δm²31 in eV²
    #[arg(long, allow_hyphen_values = true)]
    dm31_sq: Option<String>,
    /// Δm²32 in eV²
    #[arg(long, allow_hyphen_values = true)]
    dm32_sq: Option<String>,
}

impl SweepArgs {
    fn inputs(&self) -> ConfigInputs {
        let pairs = [
            ("flavor", &self.flavor),
            ("loe_min", &self.loe_min),
            ("loe_max", &self.loe_max),
            ("points", &self.points),
            ("spacing", &self.spacing),
            ("units", &self.units),
            ("output", &self.output),
            ("theta12", &self.theta12),
            ("theta23", &self.theta23),
            ("theta13", &self.theta13),
            ("delta_cp", &self.delta_cp),
            ("alpha1", &self.alpha1),
            ("alpha2", &self.alpha2),
            ("dm21_sq", &self.dm21_sq),
            ("dm31_sq", &self.dm31_sq),
            ("dm32_sq", &self.dm32_sq),
        ];
        ConfigInputs {
            flags: pairs
                .into_iter()
                .filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone())))
                .collect(),
            config_file: self.config.clone(),
            params_file: std::env::var_os(PARAMS_ENV)
                .filter(|v| !v.is_empty())
                .map(PathBuf::from),
        }
    }
}

fn fail(err: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Params(args) => match parse_config(&args.inputs()) {
            Ok(config) => {
                print!("{}", format_params(&config.params));
                ExitCode::SUCCESS
            }
            Err(e) => fail(e),
        },
        Command::Sweep(args) => {
            let config = match parse_config(&args.inputs()) {
                Ok(c) => c,
                Err(e) => return fail(e),
            };
            match run_sweep(&config) {
                Ok(rows) => {
                    if let Some(path) = &config.output {
                        eprintln!("wrote {} rows to {}", rows.len(), path.display());
                    } else {
                        let stdout = io::stdout();
                        let mut lock = stdout.lock();
                        if let Err(e) = write_csv(&mut lock, &rows).and_then(|_| lock.flush()) {
                            return fail(e);
                        }
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
        Command::Verify(args) => {
            let config = match parse_config(&args.inputs()) {
                Ok(c) => c,
                Err(e) => return fail(e),
            };
            match verify(&config) {
                Ok(outcome) => match &outcome.failure {
                    None => {
                        println!(
                            "ok: {} points, {} checks, flavor {}",
                            outcome.points, outcome.checks, config.flavor
                        );
                        ExitCode::SUCCESS
                    }
                    Some(failure) => {
                        println!("FAILED: {failure}");
                        ExitCode::from(1)
                    }
                },
                Err(e @ SweepError::Eval { .. }) => {
                    println!("FAILED: {e}");
                    ExitCode::from(1)
                }
                Err(e) => fail(e),
            }
        }
    }
}
