//! Exact finite-temperature Loschmidt-echo dynamics for quenched quasi-free
//! fermion chains, with the quantum XY chain in a transverse field as the
//! concrete model.
//!
//! The crate is `no_std` (it needs `alloc`) and purely computational:
//!
//! - [`model`]: quench parameters, quantized momenta and the per-mode
//!   spectral data (dispersion, Bogoliubov angles, thermal ratios).
//! - [`echo`]: the exact echo `L(t)` as a product over modes, the linearized
//!   echo `L_F(t)`, the effective dimension and the sandwich bounds.
//! - [`averages`]: infinite-time averages and the variance of `L`.
//! - [`special`]: complete elliptic integrals and the Bessel function `J0`.
//! - [`stats`]: full-time statistics of `ln L`: weights, seeded time
//!   sampling, histograms, characteristic functions and classification.
//!
//! Every per-mode reduction runs in ascending momentum order so that results
//! are bit-reproducible no matter how callers parallelize over times.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod averages;
pub mod echo;
mod error;
pub mod model;
pub mod special;
pub mod stats;

#[cfg(test)]
pub(crate) mod testing;

pub use error::{Error, Result};
pub use model::{ModeEntry, ModeQuantities, ModeTable, QuenchParams, Temperature};
