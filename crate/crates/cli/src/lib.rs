//! Command-line front end for `plrs`.
//!
//! Exit codes: 0 success, 1 a checked property failed, 2 usage or
//! configuration error.

pub mod args;
pub mod commands;
pub mod render;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

use crate::args::{Cli, RunConfig};
use crate::commands::{execute, Context, Failure};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Parses `argv` (program name first), runs the command and returns the
/// exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run_config(cli) {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            EXIT_USAGE
        }
        Err(Failure::Verification(message)) => {
            eprintln!("verification failed: {message}");
            EXIT_VERIFICATION
        }
    }
}

fn run_config(cli: Cli) -> Result<(), Failure> {
    let config = RunConfig::merge(cli).map_err(Failure::Usage)?;
    let coefficients = config.coefficients.as_deref().ok_or_else(|| {
        Failure::Usage(
            "no recurrence given; pass --coeffs or set \"coefficients\" in --config".into(),
        )
    })?;
    let spec = coefficients
        .parse()
        .map_err(|e: plrs::Error| Failure::Usage(e.to_string()))?;
    let command = config
        .command
        .as_ref()
        .ok_or_else(|| Failure::Usage("no subcommand given; see --help".into()))?;
    if let Some(threads) = config.threads {
        if threads == 0 {
            return Err(Failure::Usage("--threads must be at least 1".into()));
        }
        // Fails only if the pool already exists, as in repeated in-process runs.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    let ctx = Context {
        spec,
        format: config.format,
        cap: config.cap.unwrap_or_else(plrs::ensemble::enumeration_cap),
        precision: config.precision.unwrap_or(plrs::DEFAULT_PRECISION),
    };
    if ctx.precision == 0 {
        return Err(Failure::Usage("--precision must be positive".into()));
    }

    let outcome = execute(&ctx, command)?;
    match &config.output {
        Some(path) => std::fs::write(path, &outcome.text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            // A closed pipe is not an error worth reporting.
            let _ = stdout
                .write_all(outcome.text.as_bytes())
                .and_then(|()| stdout.flush());
        }
    }
    match outcome.failed {
        Some(message) => Err(Failure::Verification(message)),
        None => Ok(()),
    }
}
