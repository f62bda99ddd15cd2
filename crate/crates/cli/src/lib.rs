//! Command-line scans and verification suites for the XXZ toolkit.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod record;
pub mod verify;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::Parser;
use serde_json::json;

pub use error::CliError;

use args::{Cli, Command, Format};
use commands::Report;

/// What `main` prints and where.
#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    pub out: Option<PathBuf>,
    /// Diagnostics for stderr.
    pub notes: Vec<String>,
    /// A verification check failed (exit 1).
    pub failed: bool,
}

/// Parses `argv` (program name first), merges `--config`, runs the command.
pub fn run(argv: Vec<OsString>) -> Result<Outcome, CliError> {
    let args = config::expand_args(argv, &args::SUBCOMMANDS)?;
    let cli = Cli::try_parse_from(args)?;
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        return Err(CliError::Usage(format!("--tol {} must be positive", cli.tol)));
    }
    let mut report = match &cli.command {
        Command::SectorSpectrum(a) => commands::sector_spectrum(a, cli.tol)?,
        Command::HwSpectrum(a) => commands::hw_spectrum(a, cli.tol)?,
        Command::Dispersion(a) => commands::dispersion(a, cli.tol)?,
        Command::ScanConvergence(a) => commands::scan_convergence(a, cli.tol)?,
        Command::Verify(a) => {
            let checks = verify::run_suite(a.suite, a.max_len, a.nmax, cli.seed)?;
            let passed = checks.iter().filter(|c| c.passed).count();
            let mut r = Report { command: "verify".into(), ..Default::default() };
            r.summary = Some(json!({ "checks": checks.len(), "passed": passed, "failed": checks.len() - passed }));
            r.passed = Some(passed == checks.len());
            r.checks = checks;
            r
        }
    };
    record::sort_records(&mut report.records);
    let failed = report.passed == Some(false);
    let mut notes: Vec<String> = report.warnings.iter().map(|w| format!("warning: {w}")).collect();
    let flagged = report.records.iter().filter(|r| r.flagged).count();
    if flagged > 0 {
        notes.push(format!("warning: {flagged} record(s) flagged: residual above tolerance"));
    }
    // verdicts are always JSON; scans honour --format
    let text = if cli.format == Format::Json || matches!(cli.command, Command::Verify(_)) {
        let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
        s.push('\n');
        s
    } else {
        if let Some(summary) = &report.summary {
            notes.push(format!("summary: {summary}"));
        }
        record::write_csv(&report.records)?
    };
    Ok(Outcome { text, out: cli.out, notes, failed })
}
