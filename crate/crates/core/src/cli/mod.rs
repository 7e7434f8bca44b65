//! Command-line front end.
//!
//! `solve`, `partner`, `bands` and `verify` each produce one JSON report and,
//! except for `verify`, a sampled table. Output is deterministic: numbers are
//! rounded to 12 significant digits and every file starts with the echoed
//! configuration and tool version.
//!
//! Exit status: 0 success, 2 invalid input, 3 numerical failure (including a
//! failed `verify` check).

mod commands;
mod config;
mod output;
mod verify;

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand};

pub use commands::{build_partner, cmd_bands, cmd_partner, cmd_solve};
pub use config::{Flags, Format, RunConfig};
pub use output::{error_body, round12, Document, Table, SCHEMA_VERSION};
pub use verify::{cmd_verify, run_suite, Check};

use crate::error::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "lame-susy", version, about = "Bloch solutions and SUSY partners of the associated Lamé potential")]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Coefficients, characteristic roots and sampled ψ± at energy E.
    Solve,
    /// Sampled (x, V, Vtilde) for a first- or second-order partner.
    Partner,
    /// Band edges and the sampled Hill discriminant over E_range.
    Bands,
    /// Run every invariant for the configured instance.
    Verify,
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_validation() {
        EXIT_VALIDATION
    } else {
        EXIT_NUMERIC
    }
}

/// Parse `args` (including the program name) and run, writing to `stdout`
/// and `stderr`. Returns the process exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
            let _ = write!(stderr, "{}", e.render());
            if !e.use_stderr() {
                let _ = write!(stdout, "{e}");
            }
            return code;
        }
    };
    let fail = |e: Error, stdout: &mut dyn Write| {
        let code = exit_code(&e);
        let _ = stdout.write_all(error_body(&e, code).as_bytes());
        code
    };
    let config = match RunConfig::resolve(&cli.flags) {
        Ok(c) => c,
        Err(e) => return fail(e, stdout),
    };
    if cli.flags.show_config {
        let text = serde_json::to_string_pretty(&config).unwrap_or_default();
        let _ = writeln!(stdout, "{text}");
        return EXIT_OK;
    }
    let Some(command) = cli.command else {
        let _ = writeln!(stderr, "a subcommand is required: solve | partner | bands | verify");
        return EXIT_VALIDATION;
    };
    let result = match command {
        Command::Solve => cmd_solve(&config).map(|d| (d, true)),
        Command::Partner => cmd_partner(&config).map(|d| (d, true)),
        Command::Bands => cmd_bands(&config).map(|d| (d, true)),
        Command::Verify => cmd_verify(&config),
    };
    match result.and_then(|(doc, ok)| doc.emit(&config, stdout).map(|_| ok)) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_NUMERIC,
        Err(e) => fail(e, stdout),
    }
}
