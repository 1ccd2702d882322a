//! Coherent-feedback loop shaping for optomechanical sideband cooling.
//!
//! - [`netalg`]: cavity, filter and delay responses and the interconnection solver
//! - [`spectra`]: normalized force-noise spectra, Stokes/anti-Stokes rates, occupations
//! - [`design`]: notch and band-pass presets, optimal detuning, parameter sweeps
//! - [`oracle`]: state-space model and Lyapunov steady state used for cross-checks

pub mod design;
pub mod error;
pub mod netalg;
pub mod oracle;
pub mod spectra;

pub use error::{Error, Result};
