//! Validated run configuration shared by all subcommands.

use std::path::PathBuf;

use geofreq::fixtures::Fixture;
use geofreq::lagrange::Frame;

use crate::error::{CliError, CliResult};

/// Minimum samples per period of the highest harmonic.
pub const MIN_SAMPLES_PER_PERIOD: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Synth,
    Analyze,
    Decompose,
    Classify,
    Figures,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub case: Option<Fixture>,
    /// Fundamental frequency (Hz).
    pub f0: f64,
    /// Length of the synthesized window (s).
    pub duration: f64,
    /// Sample step (s).
    pub dt: f64,
    pub frame: Frame,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn omega0(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.f0
    }

    pub fn validate(&self) -> CliResult<()> {
        let positive = |name: &str, x: f64| {
            if x.is_finite() && x > 0.0 {
                Ok(())
            } else {
                Err(CliError::Usage(format!(
                    "--{name} must be positive and finite, got {x}"
                )))
            }
        };
        positive("f0", self.f0)?;
        positive("dt", self.dt)?;
        positive("duration", self.duration)?;
        if self.duration < 2.0 * self.dt {
            return Err(CliError::Usage(format!(
                "--duration {} is shorter than two samples of --dt {}",
                self.duration, self.dt
            )));
        }

        // Figures always include the harmonic fixture.
        let harmonic = self.case == Some(Fixture::Harmonic) || self.command == CommandKind::Figures;
        if harmonic {
            let h_max = Fixture::Harmonic.spec(self.f0).max_order() as f64;
            let limit = 1.0 / (MIN_SAMPLES_PER_PERIOD * self.f0 * h_max);
            if !(self.dt < limit) {
                return Err(CliError::Usage(format!(
                    "--dt {} too coarse for harmonic order {h_max}: need dt < {limit:e}",
                    self.dt
                )));
            }
        }
        if let Frame::Harmonic(h) = self.frame {
            if self.case != Some(Fixture::Harmonic) {
                return Err(CliError::Usage(format!(
                    "--frame harmonic:{h} requires --case harmonic"
                )));
            }
        }
        Ok(())
    }
}

/// Parses `fundamental` or `harmonic:<h>`.
pub fn parse_frame(s: &str) -> Result<Frame, String> {
    if s.eq_ignore_ascii_case("fundamental") {
        return Ok(Frame::Fundamental);
    }
    let order = s
        .strip_prefix("harmonic:")
        .ok_or_else(|| format!("expected 'fundamental' or 'harmonic:<h>', got '{s}'"))?;
    match order.parse::<u32>() {
        Ok(h) if h >= 1 => Ok(Frame::Harmonic(h)),
        _ => Err(format!(
            "harmonic order must be a positive integer, got '{order}'"
        )),
    }
}

pub fn parse_case(s: &str) -> Result<Fixture, String> {
    s.parse()
}
