//! Command-line front end for the Dirac-Morse series solution.
//!
//! Units: ħ = m = 1, lengths in units where the Compton wavelength is λ̃,
//! energies ε in units of the rest energy mc² = 1/λ̃².

mod commands;
mod config;
mod output;
mod verify;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::{BranchName, Format, RunConfig};
use crate::output::Table;
use crate::verify::{Suite, VerifyOptions};

#[derive(Debug)]
pub enum CliError {
    /// Exit code 2.
    Config(String),
    /// Exit code 3.
    Numeric(String),
    /// Exit code 1.
    VerificationFailed(usize),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::VerificationFailed(_) => 1,
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Numeric(m) => write!(f, "numerical failure: {m}"),
            CliError::VerificationFailed(n) => write!(f, "{n} verification check(s) failed"),
        }
    }
}

impl From<dirac_morse::Error> for CliError {
    fn from(e: dirac_morse::Error) -> Self {
        use dirac_morse::Error as E;
        match e {
            E::Numeric(_) | E::DegenerateRecursion { .. } => CliError::Numeric(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Config(format!("output: {e}"))
    }
}

/// A reader that closed the pipe early is not an error.
fn tolerate_closed_pipe(r: io::Result<()>) -> io::Result<()> {
    match r {
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
        other => other,
    }
}

/// Series solution of the one-dimensional Dirac equation with a Morse potential.
///
/// All quantities are in natural units ħ = m = 1: the Compton wavelength is
/// lambda_c and energies epsilon are in units of the rest energy 1/lambda_c².
/// Exit codes: 0 success, 1 verification failure, 2 configuration error,
/// 3 numerical non-convergence.
#[derive(Debug, Parser)]
#[command(name = "dirac-morse", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form bound-state spectrum beside the shooting oracle.
    Spectrum(Common),
    /// Sample a bound state (--state) or a scattering state (--energy) on a grid.
    Wavefunction(Common),
    /// Dual Hahn polynomials and expansion coefficients of a scattering state.
    Coefficients(Common),
    /// Run the invariant suites and report pass/fail per check.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct Common {
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write results here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Number of series terms.
    #[arg(long)]
    n_terms: Option<usize>,
    /// Scattering energy epsilon with |epsilon| > 1.
    #[arg(long, allow_hyphen_values = true)]
    energy: Option<f64>,
    /// Basis exponent alpha > 0.
    #[arg(long)]
    alpha: Option<f64>,
    /// Bound-state level n.
    #[arg(long)]
    state: Option<usize>,
    #[arg(long, value_enum)]
    branch: Option<BranchName>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    /// Run a single suite.
    #[arg(long, value_enum)]
    only: Option<Suite>,
    /// Test hook: shift the basis parameter zeta by 0.1 so the tridiagonality suite must fail.
    #[arg(long)]
    inject_fault: bool,
}

impl Common {
    fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut c = match &self.config {
            Some(path) => RunConfig::load(path).map_err(CliError::Config)?,
            None => RunConfig::default(),
        };
        if let Some(v) = &self.output {
            c.output = Some(v.clone());
        }
        if let Some(v) = self.format {
            c.format = v;
        }
        if let Some(v) = self.n_terms {
            c.n_terms = v;
        }
        if let Some(v) = self.energy {
            c.energy = Some(v);
        }
        if let Some(v) = self.alpha {
            c.alpha = v;
        }
        if let Some(v) = self.state {
            c.state = Some(v);
        }
        if let Some(v) = self.branch {
            c.branch = v;
        }
        c.validate().map_err(CliError::Config)?;
        Ok(c)
    }
}

fn sink(config: &RunConfig) -> Result<Box<dyn Write>, CliError> {
    Ok(match &config.output {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).map_err(|e| CliError::Config(format!("cannot create {}: {e}", path.display())))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn emit(table: Table, config: &RunConfig) -> Result<(), CliError> {
    let mut out = sink(config)?;
    tolerate_closed_pipe(table.write(&mut out, config.format, config).and_then(|()| out.flush()))?;
    Ok(())
}

fn run_verify(args: &VerifyArgs) -> Result<(), CliError> {
    let config = args.common.resolve()?;
    let suites: Vec<Suite> = match args.only {
        Some(s) => vec![s],
        None => Suite::ALL.to_vec(),
    };
    let opts = VerifyOptions { alpha: config.alpha, inject_fault: args.inject_fault };
    let checks = verify::run(&config.model.params(), &suites, opts);
    let mut out = sink(&config)?;
    let report = |out: &mut dyn Write| -> io::Result<()> {
        match config.format {
            Format::Json => {
                let doc = serde_json::json!({ "config": config, "results": checks });
                serde_json::to_writer_pretty(&mut *out, &doc)?;
                writeln!(out)?;
            }
            Format::Csv => {
                for c in &checks {
                    writeln!(out, "{}", c.line())?;
                }
                let passed = checks.iter().filter(|c| c.pass).count();
                writeln!(out, "verify: {passed} of {} checks passed", checks.len())?;
            }
        }
        out.flush()
    };
    tolerate_closed_pipe(report(&mut out))?;
    let failed = checks.iter().filter(|c| !c.pass).count();
    if failed > 0 {
        return Err(CliError::VerificationFailed(failed));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Spectrum(c) => {
            let config = c.resolve()?;
            emit(commands::cmd_spectrum(&config)?, &config)
        }
        Command::Wavefunction(c) => {
            let config = c.resolve()?;
            emit(commands::cmd_wavefunction(&config)?, &config)
        }
        Command::Coefficients(c) => {
            let config = c.resolve()?;
            emit(commands::cmd_coefficients(&config)?, &config)
        }
        Command::Verify(v) => run_verify(&v),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
