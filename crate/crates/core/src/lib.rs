//! Near-field coupling of nanomechanical oscillators to whispering-gallery
//! microcavities: coupling rates, effective masses, displacement and force
//! noise, pump-probe response, dynamical and quantum backaction.
//!
//! All internal quantities are SI. Rates written as g are frequency shifts per
//! displacement in rad/s/m; use [`units::rate_to_hz_per_m`] for g/2π.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod backaction;
pub mod coupling;
pub mod devices;
pub mod error;
pub mod io;
pub mod lsq;
pub mod mechanics;
pub mod qba;
pub mod quadrature;
pub mod sensing;
pub mod units;

pub use devices::{CouplingGeometry, Microcavity, NanoOscillator, Orientation, OscillatorKind};
pub use error::{Error, Result};
pub use mechanics::{MechanicalMode, ProbeProfile};
pub use sensing::{DriveCondition, Readout};
pub use units::{Dimension, Hertz, Quantity, RadPerSec, Sidedness, SpectralDensity};
