//! `spinvar`: covariance analysis of spin-j states.
//!
//! Exit codes: 0 ok, 1 verification failure, 2 bad input, 3 state invariant
//! violated, 4 internal error or theorem violation. Diagnostics go to
//! stderr.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use spinvar_cli::failure::EXIT_VERIFY;
use spinvar_cli::input::{read_state_file, FamilyArgs, FamilyName};
use spinvar_cli::report::Report;
use spinvar_cli::scan::{write_csv, ScanParam, ScanSpec};
use spinvar_cli::verify::{run_suite, SuiteConfig};
use spinvar_cli::Failure;
use spinvar_core::{analyze, covariance_pair, Tolerances};

#[derive(Parser)]
#[command(name = "spinvar", version, about = "Principal-component uncertainty analysis of spin-j states")]
#[command(after_help = "Tolerances can be overridden with SPINVAR_TOL=\"key=value,...\", e.g. SPINVAR_TOL=\"slack=1e-8,mean=1e-6\".")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FamilyFlags {
    /// State family.
    #[arg(long, value_enum)]
    family: Option<FamilyName>,
    /// Spin, as an integer, half-integer ("5/2") or decimal ("2.5").
    #[arg(long)]
    j: Option<String>,
    /// Projection for the jm family.
    #[arg(long, allow_hyphen_values = true)]
    m: Option<String>,
    /// Rotation angle in radians for the coherent family.
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    /// Rotation axis for the coherent family: x, y, z or "a,b,c".
    #[arg(long, allow_hyphen_values = true)]
    axis: Option<String>,
    /// Squeezing parameter in (0, 1].
    #[arg(long)]
    xi: Option<f64>,
}

impl FamilyFlags {
    fn into_args(self) -> FamilyArgs {
        FamilyArgs { family: self.family, j: self.j, m: self.m, theta: self.theta, axis: self.axis, xi: self.xi }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one state and print its report.
    Analyze {
        /// JSON state file.
        #[arg(long, conflicts_with = "family")]
        file: Option<PathBuf>,
        #[command(flatten)]
        family: FamilyFlags,
        /// Rescale an unnormalized pure state instead of rejecting it.
        #[arg(long)]
        normalize: bool,
        /// Print the full JSON report instead of the text summary.
        #[arg(long)]
        json: bool,
    },
    /// Sweep one family parameter and print CSV.
    Scan {
        #[command(flatten)]
        family: FamilyFlags,
        /// Parameter to sweep.
        #[arg(long, value_enum)]
        param: ScanParam,
        #[arg(long, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, allow_hyphen_values = true)]
        to: f64,
        #[arg(long)]
        steps: usize,
        /// Log-spaced grid.
        #[arg(long)]
        log: bool,
    },
    /// Run the built-in verification suite.
    Verify {
        #[arg(long, default_value_t = SuiteConfig::default().seed)]
        seed: u64,
        /// Random states per spin and kind in the theorem suite.
        #[arg(long, default_value_t = SuiteConfig::default().trials)]
        trials: usize,
    },
}

fn tolerances() -> Result<Tolerances, Failure> {
    match std::env::var("SPINVAR_TOL") {
        Ok(spec) => Tolerances::default().with_overrides(&spec).map_err(|e| Failure::input(format!("SPINVAR_TOL: {e}"))),
        Err(std::env::VarError::NotPresent) => Ok(Tolerances::default()),
        Err(e) => Err(Failure::input(format!("SPINVAR_TOL: {e}"))),
    }
}

fn emit(text: &str) -> Result<(), Failure> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| Failure::internal(format!("writing output: {e}")))
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    let tol = tolerances()?;
    match cli.command {
        Command::Analyze { file, family, normalize, json } => {
            let input = match file {
                Some(path) => read_state_file(&path)?,
                None => family.into_args().to_state_file()?,
            };
            let (ops, state) = input.build(&tol, normalize)?;
            let report = Report::new(input, &analyze(&state, &ops)?);
            if json {
                emit(&(report.to_json() + "\n"))?;
            } else {
                emit(&report.to_text())?;
            }
        }
        Command::Scan { family, param, from, to, steps, log } => {
            let spec = ScanSpec { base: family.into_args(), param, from, to, steps, log };
            let rows = spec.rows(&tol)?;
            write_csv(&rows, std::io::stdout().lock())?;
        }
        Command::Verify { seed, trials } => {
            let outcomes = run_suite(SuiteConfig { seed, trials, tol }, covariance_pair);
            let mut text = String::new();
            for o in &outcomes {
                text.push_str(&format!("{o}\n"));
            }
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            text.push_str(&format!("{} checks, {failed} failed\n", outcomes.len()));
            emit(&text)?;
            if failed > 0 {
                return Ok(ExitCode::from(EXIT_VERIFY));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(spinvar_cli::failure::EXIT_INPUT) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("spinvar: {f}");
            ExitCode::from(f.code)
        }
    }
}
