//! Long internal waves in isopycnal coordinates: dispersion and normal modes,
//! resonant triad coefficients, the angle-averaged three-wave kinetic equation
//! with its stationary spectra, Garrett-Munk reference spectra, and a
//! pseudo-spectral laboratory for the underlying Hamiltonian models.

// `!(x > 0.0)` is used on purpose so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dispersion;
pub mod error;
pub mod gm;
pub mod grid;
pub mod hamlab;
pub mod kinetic;
pub mod manifold;
pub mod numerics;
pub mod params;
pub mod spectrum;
pub mod triads;

pub use error::{Error, Result};
pub use grid::{make_log_grid, Cutoffs, GridNode, SpectralGrid};
pub use params::{PhysicalParams, Wavevector, HIGH_FREQUENCY_RATIO};
pub use spectrum::{
    sample_power_law, Equipartition, Extrapolation, PowerLawSpectrum, Spectrum, WaveactionSpectrum,
};
