//! Analytic L² series solution of the one-dimensional Dirac equation with the
//! exponential Morse potential V(x) = −A e^{−ωx}, together with the numerical
//! oracles that check it.
//!
//! Units are atomic (ħ = m = 1); energies are dimensionless, in units of
//! mc² = 1/λ̃², where λ̃ is the Compton wavelength.

pub mod bound;
pub mod error;
pub mod model;
pub mod oracle;
pub mod scatter;
pub mod specfun;
pub mod tridiag;

pub use error::{Error, Result};
