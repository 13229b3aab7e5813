mod commands;
mod error;
mod input;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{Format, PlotKind, PlotOptions, Which};
use error::{CliError, CliResult};

/// Spectral analysis and billing of electric load curves.
#[derive(Parser)]
#[command(name = "loadspace", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fourier coefficients of a load profile.
    Decompose {
        /// Profile CSV (`t,power`) or a builtin name (l1, l2).
        profile: String,
        #[arg(long)]
        nmax: Option<u32>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Bill a profile under a plan.
    Bill {
        profile: String,
        /// Plan JSON or a builtin name (plan1, plan2).
        plan: String,
        /// Supply profile whose coefficients set the price polarities.
        #[arg(long)]
        supply: Option<String>,
        #[arg(long)]
        nmax: Option<u32>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Bill one profile under two plans side by side.
    Compare {
        profile: String,
        plan_a: String,
        plan_b: String,
        #[arg(long)]
        nmax: Option<u32>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Fit the supply-cost characteristic from observed costs.
    Calibrate {
        /// CSV with header `profile,cost`; profile paths are relative to it.
        manifest: PathBuf,
        #[arg(long)]
        nmax: Option<u32>,
        #[arg(long, default_value_t = 0.0)]
        ridge: f64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// L2 distance between two profiles.
    Distance {
        a: String,
        b: String,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Reproduce the reference scenarios; exits 1 if any check fails.
    Scenarios {
        #[arg(long, value_enum, default_value_t = Which::All)]
        which: Which,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// CSV series for external plotting.
    Plotdata {
        /// Profile for `curve`/`spectrum`, dynamism plan for `pff`.
        input: String,
        #[arg(long, value_enum)]
        what: PlotKind,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        nmax: Option<u32>,
        /// Sample count when rendering an analytic curve.
        #[arg(long, default_value_t = 1001)]
        points: usize,
        /// Highest integer frequency on the price-frequency grid.
        #[arg(long, default_value_t = 200)]
        fmax: u32,
    },
}

fn run(cli: Cli) -> CliResult<(String, Option<PathBuf>, bool)> {
    let text = match cli.command {
        Command::Decompose { profile, nmax, format } => commands::decompose(&profile, nmax, format)?,
        Command::Bill { profile, plan, supply, nmax, format } => {
            commands::bill(&profile, &plan, supply.as_deref(), nmax, format)?
        }
        Command::Compare { profile, plan_a, plan_b, nmax, format } => {
            commands::compare(&profile, &plan_a, &plan_b, nmax, format)?
        }
        Command::Calibrate { manifest, nmax, ridge, format } => commands::calibrate_cmd(&manifest, nmax, ridge, format)?,
        Command::Distance { a, b, format } => commands::distance(&a, &b, format)?,
        Command::Scenarios { which, format } => {
            let (text, passed) = commands::scenarios(which, format)?;
            return Ok((text, None, passed));
        }
        Command::Plotdata { input, what, out, nmax, points, fmax } => {
            let text = commands::plotdata(&input, what, &PlotOptions { nmax, points, fmax })?;
            return Ok((text, out, true));
        }
    };
    Ok((text, None, true))
}

fn main() -> ExitCode {
    let result = run(Cli::parse()).and_then(|(text, out, passed)| {
        match out {
            Some(path) => std::fs::write(&path, text)
                .map_err(|e| CliError::precondition(format!("{}: {e}", path.display())))?,
            None => {
                let _ = std::io::stdout().write_all(text.as_bytes());
            }
        }
        if passed {
            Ok(())
        } else {
            Err(CliError::assertion("scenario checks failed"))
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
