//! `geofreq`: synthesize test waveforms, compute their geometric frequency and
//! its components, classify operating conditions, and export figure data.
//!
//! Exit codes: 0 ok, 1 I/O or other failure, 2 usage, 3 input parse error,
//! 4 numeric singularity.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod csvio;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use geofreq::fixtures::Fixture;
use geofreq::lagrange::Frame;

use config::{parse_case, parse_frame, CommandKind, RunConfig};

#[derive(Parser)]
#[command(
    name = "geofreq",
    version,
    about = "Geometric frequency analysis of multi-phase signals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GridArgs {
    /// Fundamental frequency in Hz.
    #[arg(long, default_value_t = 50.0)]
    f0: f64,
    /// Window length in seconds.
    #[arg(long, default_value_t = 0.04)]
    duration: f64,
    /// Sample step in seconds.
    #[arg(long, default_value_t = 1e-5)]
    dt: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Write a fixture waveform as CSV.
    Synth {
        #[arg(long, value_parser = parse_case)]
        case: Fixture,
        #[command(flatten)]
        grid: GridArgs,
        /// Output file (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Geometric frequency of a sampled signal CSV.
    Analyze {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Frequency components of a fixture along its analytic trajectory.
    Decompose {
        #[arg(long, value_parser = parse_case)]
        case: Fixture,
        #[command(flatten)]
        grid: GridArgs,
        /// `fundamental` or `harmonic:<h>`.
        #[arg(long, default_value = "fundamental", value_parser = parse_frame)]
        frame: Frame,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Label the operating condition of a signal CSV or a fixture.
    Classify {
        #[arg(long = "in", required_unless_present = "case", conflicts_with = "case")]
        input: Option<PathBuf>,
        #[arg(long, value_parser = parse_case)]
        case: Option<Fixture>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Write figure data for the unbalanced and harmonic fixtures.
    Figures {
        #[command(flatten)]
        grid: GridArgs,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
}

impl Command {
    fn into_config(self) -> RunConfig {
        let base = |command, grid: GridArgs| RunConfig {
            command,
            case: None,
            f0: grid.f0,
            duration: grid.duration,
            dt: grid.dt,
            frame: Frame::Fundamental,
            input: None,
            output: None,
        };
        let defaults = || GridArgs {
            f0: 50.0,
            duration: 0.04,
            dt: 1e-5,
        };
        match self {
            Command::Synth { case, grid, out } => RunConfig {
                case: Some(case),
                output: out,
                ..base(CommandKind::Synth, grid)
            },
            Command::Analyze { input, out } => RunConfig {
                input: Some(input),
                output: out,
                ..base(CommandKind::Analyze, defaults())
            },
            Command::Decompose {
                case,
                grid,
                frame,
                out,
            } => RunConfig {
                case: Some(case),
                frame,
                output: out,
                ..base(CommandKind::Decompose, grid)
            },
            Command::Classify { input, case, grid } => RunConfig {
                case,
                input,
                ..base(CommandKind::Classify, grid)
            },
            Command::Figures { grid, out } => RunConfig {
                output: Some(out),
                ..base(CommandKind::Figures, grid)
            },
        }
    }
}

fn main() -> ExitCode {
    let cfg = Cli::parse().command.into_config();
    match commands::run(&cfg) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("geofreq: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
