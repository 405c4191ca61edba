//! `bhlab`: two bosons with an impurity on a ring or chain.
//!
//! Exit codes: 0 success, 1 internal error, 2 invalid input, 3 a numerical
//! acceptance check failed (artifacts are still written).

mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::Failure;
use config::{resolve, Flags};
use output::Output;

#[derive(Parser)]
#[command(
    name = "bhlab",
    version,
    about = "Two bosons with an impurity: spectra, Prony analysis, Bethe roots"
)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Sector spectra at one point, or level tracking along `--grid`.
    Spectrum(Flags),
    /// Recurrence test and momentum extraction for refined eigenstates.
    Prony(Flags),
    /// Bethe roots of every band (periodic ring), or a bound-state scan with `--grid`.
    Bands(Flags),
    /// Momentum-space maps and diffraction classes.
    Momentum(Flags),
    /// Yang-Baxter residuals on a momentum grid.
    Ybe(Flags),
    /// Root count and level matching against the odd sector.
    Completeness(Flags),
}

impl Verb {
    fn parts(&self) -> (&'static str, &Flags) {
        match self {
            Verb::Spectrum(f) => ("spectrum", f),
            Verb::Prony(f) => ("prony", f),
            Verb::Bands(f) => ("bands", f),
            Verb::Momentum(f) => ("momentum", f),
            Verb::Ybe(f) => ("ybe", f),
            Verb::Completeness(f) => ("completeness", f),
        }
    }
}

fn run(verb: &str, flags: &Flags) -> Result<Option<String>, Failure> {
    let cfg = resolve(flags, verb).map_err(Failure::Validation)?;
    let mut out = Output::open(&cfg.out, cfg.overwrite).map_err(Failure::Validation)?;
    let verdict = match verb {
        "spectrum" => commands::spectrum(&cfg, &mut out),
        "prony" => commands::prony(&cfg, &mut out),
        "bands" => commands::bands(&cfg, &mut out),
        "momentum" => commands::momentum(&cfg, &mut out),
        "ybe" => commands::ybe(&cfg, &mut out),
        _ => commands::completeness(&cfg, &mut out),
    }?;
    let status = if verdict.is_some() {
        "acceptance-failed"
    } else {
        "ok"
    };
    let dir = out.finish(verb, &cfg, status)?;
    eprintln!("wrote {}", dir.display());
    Ok(verdict)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (verb, flags) = cli.verb.parts();
    match run(verb, flags) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(reason)) => {
            eprintln!("bhlab {verb}: acceptance failed: {reason}");
            ExitCode::from(3)
        }
        Err(Failure::Validation(e)) => {
            eprintln!("bhlab {verb}: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(e)) => {
            eprintln!("bhlab {verb}: numerical failure: {e}");
            ExitCode::from(3)
        }
        Err(Failure::Internal(e)) => {
            eprintln!("bhlab {verb}: {e}");
            ExitCode::from(1)
        }
    }
}
