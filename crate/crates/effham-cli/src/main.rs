//! Batch driver: runs one configured command per invocation and writes a
//! deterministic report file.
//!
//! Exit status contract: 0 on success with the report written, 1 on
//! configuration or I/O errors, 2 on physics errors (resonance, broken
//! block structure, flow step underflow) with a one-line JSON error
//! record on stderr.

mod config;
mod exec;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::Parser;

use config::{parse_config, Format};
use exec::ExecError;

#[derive(Parser)]
#[command(
    name = "effham",
    version,
    about = "Effective-Hamiltonian engine for the Dicke model: adiabatic \
             elimination, closed-form variants, Wegner flow, and detuning sweeps."
)]
struct Cli {
    /// Path to the run configuration (TOML).
    config: PathBuf,

    /// Override the report path from the config.
    #[arg(long, value_name = "PATH")]
    output: Option<String>,

    /// Override the report format from the config.
    #[arg(long, value_name = "csv|json")]
    format: Option<String>,
}

fn error_kind(e: &effham::Error) -> &'static str {
    match e {
        effham::Error::DimensionOverflow { .. } => "DimensionOverflow",
        effham::Error::DimensionMismatch { .. } => "DimensionMismatch",
        effham::Error::NotDiagonal { .. } => "NotDiagonal",
        effham::Error::NotSymmetric { .. } => "NotSymmetric",
        effham::Error::Resonance { .. } => "Resonance",
        effham::Error::NotBlockDiagonal { .. } => "NotBlockDiagonal",
        effham::Error::StepUnderflow { .. } => "StepUnderflow",
        effham::Error::DomainError(_) => "DomainError",
        effham::Error::DegenerateFit(_) => "DegenerateFit",
    }
}

fn is_physics(e: &effham::Error) -> bool {
    matches!(
        e,
        effham::Error::Resonance { .. }
            | effham::Error::NotBlockDiagonal { .. }
            | effham::Error::StepUnderflow { .. }
    )
}

fn fail(kind: &str, detail: &str, code: u8) -> ExitCode {
    eprintln!(
        "{}",
        serde_json::json!({ "error": kind, "detail": detail })
    );
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e)
            if matches!(
                e.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) =>
        {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail("UsageError", &e.to_string(), 1),
    };

    let text = match std::fs::read_to_string(&cli.config) {
        Ok(text) => text,
        Err(e) => {
            return fail(
                "IoError",
                &format!("cannot read '{}': {e}", cli.config.display()),
                1,
            )
        }
    };

    let mut run_config = match parse_config(&text) {
        Ok(c) => c,
        Err(e) => return fail("ConfigError", &e.to_string(), 1),
    };

    if let Some(format) = cli.format.as_deref() {
        match Format::from_str(format) {
            Ok(f) => run_config.format = f,
            Err(e) => return fail("UsageError", &e, 1),
        }
    }
    if let Some(path) = cli.output {
        run_config.output_path = path;
    }

    match exec::execute(&run_config) {
        Ok(_) => ExitCode::SUCCESS,
        Err(ExecError::Io(detail)) => fail("IoError", &detail, 1),
        Err(ExecError::Physics(e)) => {
            let code = if is_physics(&e) { 2 } else { 1 };
            fail(error_kind(&e), &e.to_string(), code)
        }
    }
}
