//! `abc`: spectrum tables, amplitude evaluation and scans, and identity
//! checks for the Aharonov-Bohm-Coulomb system.

mod commands;
mod config;
mod output;

use std::io::Write;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use config::{Settings, UsageError};
use output::Document;

const EXIT_USAGE: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;
const EXIT_CHECK_FAILED: u8 = 3;

#[derive(Parser)]
#[command(
    name = "abc",
    version,
    about = "Aharonov-Bohm-Coulomb bound states and fixed-energy amplitude (natural units, hbar = 1)",
    after_help = "Exit status: 0 success, 1 usage or configuration error, 2 numerical precondition violated, 3 check failed."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List bound-state levels with degeneracies, lowest first
    Spectrum(Settings),
    /// Evaluate the amplitude with both evaluators at a point or along a scan
    Green(Settings),
    /// Run identity checks and the oracle spectrum comparison
    Check(Settings),
}

fn run(cli: Cli) -> Result<u8> {
    let (settings, which) = match cli.command {
        Command::Spectrum(s) => (s, "spectrum"),
        Command::Green(s) => (s, "green"),
        Command::Check(s) => (s, "check"),
    };
    let cfg = settings.resolve()?;
    let outcome = match which {
        "spectrum" => commands::spectrum(&cfg)?,
        "green" => commands::green(&cfg)?,
        _ => commands::check(&cfg)?,
    };
    let doc = Document::new(&cfg, outcome.results, outcome.diagnostics)?;
    let bytes = doc.render(cfg.format)?;
    match &cfg.out {
        Some(path) => std::fs::write(path, &bytes).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(&bytes)?,
    }
    Ok(if outcome.passed { 0 } else { EXIT_CHECK_FAILED })
}

fn error_kind(e: &anyhow::Error) -> (&'static str, u8) {
    use abc_core::Error as E;
    if e.downcast_ref::<UsageError>().is_some() {
        return ("usage", EXIT_USAGE);
    }
    match e.chain().find_map(|c| c.downcast_ref::<E>()) {
        Some(E::InvalidParameter { .. }) => ("invalid_parameter", EXIT_USAGE),
        Some(E::NoBoundStates { .. }) => ("no_bound_states", EXIT_NUMERICAL),
        Some(E::EndpointOnAxis(_)) => ("endpoint_on_axis", EXIT_NUMERICAL),
        Some(E::IllConditionedEnergy { .. }) => ("ill_conditioned_energy", EXIT_NUMERICAL),
        Some(E::DegeneratePoint) | Some(E::SingularConfiguration(_)) => ("singular_geometry", EXIT_NUMERICAL),
        Some(E::Accuracy { .. }) => ("accuracy", EXIT_NUMERICAL),
        Some(E::Resolution(_)) => ("resolution", EXIT_NUMERICAL),
        Some(E::Domain { .. }) => ("domain", EXIT_NUMERICAL),
        None => ("io", EXIT_USAGE),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.kind().as_str().map(str::to_string).unwrap_or_default();
            let detail = e.to_string();
            let first = detail.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("{}", serde_json::json!({"error": "usage", "message": first, "kind": msg}));
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let (kind, code) = error_kind(&e);
            let msg = format!("{e:#}").replace('\n', " ");
            eprintln!("{}", serde_json::json!({"error": kind, "message": msg}));
            ExitCode::from(code)
        }
    }
}
