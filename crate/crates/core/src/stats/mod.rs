//! Full-time statistics of `Z = ln L(t)` under a uniformly random
//! observation time.
//!
//! To second order in the quench, `Z = Z̄ + Σ_k a_k cos(ω_k t)` with
//! `Z̄ = −Σ_k a_k`, so the spectrum of weights `a_k` controls the shape of the
//! distribution: a couple of dominant weights give a double-peaked (or merged)
//! shape, many comparable ones a Gaussian.

pub mod bell;
pub mod charfn;
pub mod classify;
pub mod histogram;
pub mod sampling;
pub mod weights;

pub use bell::{aniso_width, bell_aniso, bell_ising, inflection_width, ising_width};
pub use charfn::{char_fn, empirical_char_fn, max_char_fn_deviation};
pub use classify::{classify, classify_weights, Classification, ClassifierConfig, Label};
pub use histogram::{find_peaks, histogram, smooth, Histogram, Peak};
pub use sampling::{default_tau, moments, sample_logle, sample_times, Moments, SampleSet};
pub use weights::{damping, weights, ModeWeight, WeightSpectrum};
