//! The four reference operating conditions used by the CLI and the test
//! suites.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::signalmodel::SignalSpec;

/// Ratio V_β/V_α of the unbalanced fixture.
pub const UNBALANCE_RATIO: f64 = 1.2;
/// Harmonic orders of the non-sinusoidal fixture.
pub const HARMONIC_ORDERS: [u32; 2] = [7, 11];
/// Exponential rate of the dc fixture (1/s).
pub const DC_LAMBDA: f64 = -0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Fixture {
    Balanced,
    Unbalanced,
    Harmonic,
    Dc,
}

impl Fixture {
    pub const ALL: [Fixture; 4] = [
        Fixture::Balanced,
        Fixture::Unbalanced,
        Fixture::Harmonic,
        Fixture::Dc,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Fixture::Balanced => "balanced",
            Fixture::Unbalanced => "unbalanced",
            Fixture::Harmonic => "harmonic",
            Fixture::Dc => "dc",
        }
    }

    /// Signal parameters at fundamental `f0` (Hz). Amplitudes are per unit.
    pub fn spec(&self, f0: f64) -> SignalSpec {
        let omega0 = 2.0 * PI * f0;
        match self {
            Fixture::Balanced => SignalSpec::Balanced {
                amplitude: 1.0,
                omega0,
                phase: 0.0,
            },
            Fixture::Unbalanced => SignalSpec::Unbalanced {
                v_alpha: 1.0,
                v_beta: UNBALANCE_RATIO,
                omega0,
                phase: PI / 6.0,
            },
            Fixture::Harmonic => {
                SignalSpec::harmonic_fixture(1.0, omega0, PI / 6.0, &HARMONIC_ORDERS)
            }
            Fixture::Dc => SignalSpec::Dc {
                v0: 1.0,
                lambda: DC_LAMBDA,
            },
        }
    }
}

impl fmt::Display for Fixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Fixture {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Fixture::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                format!("unknown case '{s}' (expected balanced, unbalanced, harmonic or dc)")
            })
    }
}
