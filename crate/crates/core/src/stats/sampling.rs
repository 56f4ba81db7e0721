use alloc::vec::Vec;

use libm::{exp, sqrt};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::echo::ln_loschmidt;
use crate::model::ModeTable;
use crate::{Error, Result};

pub const DEFAULT_TAU_FACTOR: f64 = 100.0;
pub const DEFAULT_SAMPLES: usize = 100_000;
pub const DEFAULT_SEED: u64 = 0x5eed_1e55_ca5c_ade5;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SampleSet {
    pub tau: f64,
    pub seed: u64,
    pub times: Vec<f64>,
    pub z_values: Vec<f64>,
    pub z_mean: f64,
}

impl SampleSet {
    /// Assembles a sample set from times and their already evaluated `ln L`.
    pub fn from_parts(tau: f64, seed: u64, times: Vec<f64>, z_values: Vec<f64>) -> Result<Self> {
        if z_values.is_empty() || times.len() != z_values.len() {
            return Err(Error::NoSamples);
        }
        let z_mean = moments(&z_values)?.mean;
        Ok(SampleSet {
            tau,
            seed,
            times,
            z_values,
            z_mean,
        })
    }

    pub fn len(&self) -> usize {
        self.z_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z_values.is_empty()
    }

    /// Moments of `L = e^Z`.
    pub fn le_moments(&self) -> Moments {
        let le: Vec<f64> = self.z_values.iter().map(|&z| exp(z)).collect();
        moments(&le).expect("sample set is never empty")
    }

    pub fn z_moments(&self) -> Moments {
        moments(&self.z_values).expect("sample set is never empty")
    }
}

/// `τ = factor · L²`.
pub fn default_tau(length: usize, factor: f64) -> f64 {
    let l = length as f64;
    factor * l * l
}

/// `n` times uniform on `[0, τ)`, drawn sequentially from a ChaCha8 stream.
pub fn sample_times(tau: f64, n: usize, seed: u64) -> Result<Vec<f64>> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::InvalidHorizon(tau));
    }
    if n == 0 {
        return Err(Error::NoSamples);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n).map(|_| tau * rng.random::<f64>()).collect())
}

/// Samples `Z = ln L(t)` from the exact product formula.
pub fn sample_logle(table: &ModeTable, tau: f64, n: usize, seed: u64) -> Result<SampleSet> {
    let times = sample_times(tau, n, seed)?;
    let z = times.iter().map(|&t| ln_loschmidt(table, t)).collect();
    SampleSet::from_parts(tau, seed, times, z)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Moments {
    pub n: usize,
    pub mean: f64,
    /// Unbiased sample variance; zero for a single value.
    pub variance: f64,
    /// Standard error of the mean.
    pub std_error: f64,
}

/// Mean and variance by Welford's update, in input order.
pub fn moments(values: &[f64]) -> Result<Moments> {
    if values.is_empty() {
        return Err(Error::NoSamples);
    }
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for (i, &x) in values.iter().enumerate() {
        let d = x - mean;
        mean += d / (i + 1) as f64;
        m2 += d * (x - mean);
    }
    let n = values.len();
    let variance = if n > 1 { m2 / (n - 1) as f64 } else { 0.0 };
    Ok(Moments {
        n,
        mean,
        variance,
        std_error: sqrt(variance / n as f64),
    })
}
