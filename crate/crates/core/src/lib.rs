//! Analysis toolkit for the bandpass Twin-T active filter and the ten-channel
//! filterbank built from it.
//!
//! The crate is split along the lines of the analysis:
//!
//! * [`ratfunc`]: polynomials and rational functions in the Laplace variable.
//! * [`mna`]: netlist parsing and an ideal-opamp nodal solver that produces
//!   exact transfer functions. It is the independent cross-check for every
//!   closed-form result in [`twint`].
//! * [`twint`]: closed-form transfer function, canonical special case,
//!   initial trimmer estimate and peak search.
//! * [`calibrate`]: the alternating two-trimmer calibration of each band.
//! * [`filterbank`]: end channels, channel inversions, and the summed output.
//!
//! All values are SI (ohms, farads, hertz, rad/s) unless a name says otherwise.

pub mod calibrate;
pub mod error;
mod exact;
pub mod filterbank;
pub mod mna;
mod numeric;
pub mod ratfunc;
pub mod twint;

pub use error::{Error, Result};
