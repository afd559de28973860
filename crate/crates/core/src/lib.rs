//! Geometric frequency of multi-phase electrical quantities and its
//! decomposition through the Lagrange (material) derivative of the voltage
//! viewed as a velocity field over magnetic-flux coordinates.
//!
//! - [`geomalg`]: wedge product, Hodge map, bivector action, matrix splits.
//! - [`signalmodel`]: test waveforms, Clarke transform, sampling, numeric
//!   derivative and flux recovery.
//! - [`geomfreq`]: radial frequency ρ and rotation bivector W of a vector.
//! - [`lagrange`]: velocity fields, strain/rotation decomposition, frequency
//!   components, stream-line integration.
//! - [`classify`]: operating-condition labels.

// `!(x > 0.0)` is used on purpose so NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classify;
pub mod error;
pub mod fixtures;
pub mod geomalg;
pub mod geomfreq;
pub mod lagrange;
pub mod signalmodel;

pub use error::{Error, Result};
