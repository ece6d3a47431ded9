use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use torus_rigidity::verify::{DEFAULT_SAMPLES, DEFAULT_SEED, DEFAULT_TOLERANCE};
use torus_rigidity::Mode;
use torus_rigidity_cli::commands::{self, Outcome, Status};
use torus_rigidity_cli::SAMPLES_ENV;

/// Decide, construct and verify non-affine equivariant maps between
/// toral automorphism actions.
///
/// Exit status: 0 success, 2 malformed or invalid input, 3 failed
/// precondition, 4 no witness exists, 5 verification failed, 6 source too
/// large for grid sampling.
#[derive(Parser)]
#[command(name = "torus-rigidity", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print k-indices, ergodicity, lattices and subspaces of both actions.
    Analyze {
        /// Pair document, or `-` for standard input.
        path: PathBuf,
    },
    /// Decide existence of a non-affine equivariant map.
    Decide {
        path: PathBuf,
        #[arg(long, default_value = "exact", value_parser = parse_mode)]
        mode: Mode,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build a witness map for a pair with a positive decision.
    Witness {
        path: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a witness document numerically.
    Verify {
        path: PathBuf,
        /// Defaults to 1000, or the value of TORUS_RIGIDITY_SAMPLES.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
    },
    /// Sample a witness with a one- or two-dimensional source on a grid.
    SampleMap {
        path: PathBuf,
        #[arg(long)]
        grid: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse()
}

fn read_input(path: &Path) -> io::Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path)
    }
}

fn default_samples() -> Result<usize, String> {
    match std::env::var(SAMPLES_ENV) {
        Ok(v) => v
            .parse()
            .map_err(|_| format!("{SAMPLES_ENV}={v} is not a sample count")),
        Err(_) => Ok(DEFAULT_SAMPLES),
    }
}

fn emit(outcome: Outcome, output: Option<&Path>) -> ExitCode {
    let code = outcome.status.code() as u8;
    let failed = matches!(
        outcome.status,
        Status::Invalid | Status::Precondition | Status::NoWitness | Status::SourceTooLarge
    );
    if failed {
        eprintln!("error: {}", outcome.output.trim_end());
        return ExitCode::from(code);
    }
    let written = match output {
        Some(p) => fs::write(p, &outcome.output),
        None => io::stdout().write_all(outcome.output.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(Status::Invalid.code() as u8);
    }
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let path = match &cli.command {
        Command::Analyze { path }
        | Command::Decide { path, .. }
        | Command::Witness { path, .. }
        | Command::Verify { path, .. }
        | Command::SampleMap { path, .. } => path.clone(),
    };
    let text = match read_input(&path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            return ExitCode::from(Status::Invalid.code() as u8);
        }
    };
    match cli.command {
        Command::Analyze { .. } => emit(commands::analyze(&text), None),
        Command::Decide { mode, output, .. } => emit(commands::decide(&text, mode), output.as_deref()),
        Command::Witness { output, .. } => emit(commands::witness(&text), output.as_deref()),
        Command::Verify {
            samples, seed, tol, ..
        } => {
            let samples = match samples.map(Ok).unwrap_or_else(default_samples) {
                Ok(n) => n,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(Status::Invalid.code() as u8);
                }
            };
            emit(commands::verify(&text, samples, seed, tol), None)
        }
        Command::SampleMap { grid, output, .. } => emit(commands::sample_map(&text, grid), output.as_deref()),
    }
}
