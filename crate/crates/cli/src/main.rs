#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

mod config;
mod output;
mod scenarios;

use config::{
    load, AlgebraFlags, AlgebraParams, Format, GaussianFlags, GaussianParams, HydrogenScanFlags,
    HydrogenScanParams, KapitzaFlags, KapitzaParams, StepFlags, StepParams,
};
use scenarios::Outcome;

/// Relativistic spin operators for the Dirac equation: algebra checks and
/// numerical experiments in atomic units.
#[derive(Debug, Parser)]
#[command(name = "spinorlab", version)]
struct Cli {
    /// JSON file setting any subset of the scenario parameters; flags override it
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file [default: standard output]
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Output encoding [default: csv]
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Randomized check of the operator algebra and the equivalent operator forms
    AlgebraCheck(AlgebraFlags),
    /// Gaussian wave packet scattering at a smooth potential step
    StepScatter(StepFlags),
    /// Spin dynamics in a standing light wave on the photon-momentum ladder
    Kapitza(KapitzaFlags),
    /// Ground-state spin mean and variance against the atomic number
    HydrogenScan(HydrogenScanFlags),
    /// Chakrabarti spin of a Pauli spin-up packet against its mean momentum
    ChakrabartiGaussian(GaussianFlags),
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Io(String),
    Compute(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
            CliError::Compute(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Compute(m) => write!(f, "computation failed: {m}"),
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("SPINORLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| {
            CliError::Config(format!(
                "SPINORLAB_THREADS must be a positive integer, got `{value}`"
            ))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(e.to_string()))
}

struct Resolved {
    output: Option<PathBuf>,
    format: Format,
}

fn resolve<P: Default + for<'de> serde::Deserialize<'de>>(
    cli: &Cli,
    apply: impl FnOnce(&mut P),
) -> Result<(P, Resolved), CliError> {
    let (mut params, common) = load::<P>(cli.config.as_deref())?;
    apply(&mut params);
    let resolved = Resolved {
        output: cli.output.clone().or(common.output),
        format: cli.format.or(common.format).unwrap_or_default(),
    };
    Ok((params, resolved))
}

fn execute(cli: Cli) -> Result<(Outcome, Resolved), CliError> {
    configure_threads()?;
    macro_rules! run {
        ($flags:expr, $params:ty, $driver:path) => {{
            let flags = $flags.clone();
            let (params, resolved) = resolve::<$params>(&cli, |p| flags.apply(p))?;
            Ok(($driver(&params)?, resolved))
        }};
    }
    match &cli.command {
        Command::AlgebraCheck(f) => run!(f, AlgebraParams, scenarios::algebra_check),
        Command::StepScatter(f) => run!(f, StepParams, scenarios::step_scatter),
        Command::Kapitza(f) => run!(f, KapitzaParams, scenarios::kapitza),
        Command::HydrogenScan(f) => run!(f, HydrogenScanParams, scenarios::hydrogen_scan),
        Command::ChakrabartiGaussian(f) => run!(f, GaussianParams, scenarios::chakrabarti_gaussian),
    }
}

fn emit(outcome: &Outcome, resolved: &Resolved) -> Result<(), CliError> {
    let io = |e: io::Error| CliError::Io(e.to_string());
    match &resolved.output {
        Some(path) => {
            let file =
                File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            outcome.table.write(resolved.format, &mut w).map_err(io)?;
            w.flush().map_err(io)
        }
        None => {
            let mut w = io::stdout().lock();
            outcome.table.write(resolved.format, &mut w).map_err(io)?;
            w.flush().map_err(io)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result =
        execute(cli).and_then(|(outcome, resolved)| emit(&outcome, &resolved).map(|_| outcome));
    match result {
        Ok(outcome) => {
            let mut failed = false;
            for check in &outcome.checks {
                let status = if check.passed { "ok" } else { "FAILED" };
                eprintln!("{status:>6}  {}: {}", check.name, check.detail);
                failed |= !check.passed;
            }
            eprintln!("finished in {:.1} s", start.elapsed().as_secs_f64());
            if failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("spinorlab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
