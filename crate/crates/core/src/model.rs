//! Quench parameters, quantized momenta and per-mode spectral quantities of
//! the XY chain.
//!
//! With coupling `J = 1` the chain maps onto the quasi-free form with
//! `ε_k = cos k + h` and `Δ_k = γ sin k`. Anti-periodic boundary conditions
//! quantize the momenta as `k = (2n + 1)π/L`; only the `L/2` momenta in
//! `(0, π)` are kept, each standing for a `(k, -k)` pair.

use alloc::vec::Vec;
use core::f64::consts::PI;

use libm::{atan2, cos, cosh, exp, hypot, sin, sinh, tanh};

use crate::{Error, Result};

/// Above this value of `βΛ` the thermal ratios are evaluated from
/// `exp(-βΛ)` instead of through `cosh(βΛ)`.
pub const COSH_GUARD: f64 = 350.0;

/// Thermal state of the pre-quench Gibbs ensemble.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Temperature {
    /// Finite inverse temperature `β > 0`.
    Beta(f64),
    /// The `T = 0` limit; `cosh(βΛ) → ∞` limits are taken analytically.
    Zero,
}

impl Temperature {
    /// Builds `Beta(1/T)` from a temperature `T > 0`.
    pub fn from_temperature(temperature: f64) -> Result<Self> {
        if !(temperature.is_finite() && temperature > 0.0) {
            return Err(Error::InvalidTemperature(temperature));
        }
        Ok(Temperature::Beta(1.0 / temperature))
    }

    /// `β`, or `+∞` at zero temperature.
    pub fn beta(&self) -> f64 {
        match *self {
            Temperature::Beta(beta) => beta,
            Temperature::Zero => f64::INFINITY,
        }
    }

    /// `T = 1/β`, or `0` at zero temperature.
    pub fn temperature(&self) -> f64 {
        match *self {
            Temperature::Beta(beta) => 1.0 / beta,
            Temperature::Zero => 0.0,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Temperature::Beta(beta) if !(beta.is_finite() && beta > 0.0) => {
                Err(Error::InvalidBeta(beta))
            }
            _ => Ok(()),
        }
    }
}

/// A sudden quench `(h⁰, γ⁰) → (h¹, γ¹)` of an `L`-site chain prepared in
/// the Gibbs state of the pre-quench Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QuenchParams {
    pub h0: f64,
    pub h1: f64,
    pub gamma0: f64,
    pub gamma1: f64,
    pub temperature: Temperature,
    pub length: usize,
}

impl QuenchParams {
    pub fn new(h0: f64, h1: f64, gamma0: f64, gamma1: f64, beta: f64, length: usize) -> Result<Self> {
        let params = QuenchParams {
            h0,
            h1,
            gamma0,
            gamma1,
            temperature: Temperature::Beta(beta),
            length,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn zero_temperature(h0: f64, h1: f64, gamma0: f64, gamma1: f64, length: usize) -> Result<Self> {
        let params = QuenchParams {
            h0,
            h1,
            gamma0,
            gamma1,
            temperature: Temperature::Zero,
            length,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        validate_length(self.length)?;
        for (name, value) in [
            ("h0", self.h0),
            ("h1", self.h1),
            ("gamma0", self.gamma0),
            ("gamma1", self.gamma1),
        ] {
            if !value.is_finite() {
                return Err(Error::NonFinite { name, value });
            }
        }
        self.temperature.validate()
    }

    pub fn beta(&self) -> f64 {
        self.temperature.beta()
    }

    pub fn with_temperature(mut self, temperature: Temperature) -> Result<Self> {
        self.temperature = temperature;
        self.validate()?;
        Ok(self)
    }

    pub fn with_length(mut self, length: usize) -> Result<Self> {
        self.length = length;
        self.validate()?;
        Ok(self)
    }

    /// True when pre- and post-quench Hamiltonians coincide.
    pub fn is_trivial(&self) -> bool {
        self.h0 == self.h1 && self.gamma0 == self.gamma1
    }
}

fn validate_length(length: usize) -> Result<()> {
    if length < 2 || length % 2 != 0 {
        return Err(Error::InvalidLength(length));
    }
    Ok(())
}

/// Quantized momenta `k = (2n + 1)π/L`, `n = 0 … L/2 − 1`, in increasing order.
pub fn momenta(length: usize) -> Result<Vec<f64>> {
    validate_length(length)?;
    let l = length as f64;
    Ok((0..length / 2)
        .map(|n| (2 * n + 1) as f64 * PI / l)
        .collect())
}

/// Single-particle data of one momentum mode.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ModeQuantities {
    pub k: f64,
    pub eps: f64,
    pub delta: f64,
    /// `Λ_k = sqrt(ε² + Δ²)`.
    pub lambda: f64,
    /// Bogoliubov angle with `cos θ = ε/Λ` and `sin θ = Δ/Λ`.
    pub theta: f64,
}

/// XY dispersion at field `h`, anisotropy `gamma` and momentum `k`.
pub fn dispersion(h: f64, gamma: f64, k: f64) -> ModeQuantities {
    let eps = cos(k) + h;
    let delta = gamma * sin(k);
    ModeQuantities {
        k,
        eps,
        delta,
        lambda: hypot(eps, delta),
        // atan2 keeps the quadrant; atan(Δ/ε) would flip the state for ε < 0.
        theta: atan2(delta, eps),
    }
}

/// Wraps an angle into `(-π, π]`.
pub(crate) fn wrap_angle(angle: f64) -> f64 {
    let mut a = angle % (2.0 * PI);
    if a <= -PI {
        a += 2.0 * PI;
    } else if a > PI {
        a -= 2.0 * PI;
    }
    a
}

/// Thermal ratios of one mode.
///
/// With `x = βΛ⁰` and `s = 1/cosh x`, every quantity the echo formulas need is
/// a function of `s`; `c = cosh x` itself is only kept for reporting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct ThermalRatios {
    pub c: f64,
    pub inv_c: f64,
    pub one_minus_inv_c: f64,
    pub one_minus_inv_c2: f64,
}

impl ThermalRatios {
    pub(crate) fn new(temperature: Temperature, lambda0: f64) -> Self {
        match temperature {
            // A gapless pre-quench mode stays at x = 0 for every β.
            Temperature::Zero if lambda0 > 0.0 => ThermalRatios {
                c: f64::INFINITY,
                inv_c: 0.0,
                one_minus_inv_c: 1.0,
                one_minus_inv_c2: 1.0,
            },
            Temperature::Zero => Self::from_x(0.0),
            Temperature::Beta(beta) => Self::from_x(beta * lambda0),
        }
    }

    pub(crate) fn from_x(x: f64) -> Self {
        let x = x.abs();
        let (inv_c, one_minus_inv_c) = if x > COSH_GUARD {
            let e = exp(-x);
            let s = 2.0 * e / (1.0 + e * e);
            (s, 1.0 - s)
        } else if x < 1.0 {
            let half = sinh(0.5 * x);
            let c = cosh(x);
            (1.0 / c, 2.0 * half * half / c)
        } else {
            let s = 1.0 / cosh(x);
            (s, 1.0 - s)
        };
        let th = tanh(x);
        ThermalRatios {
            c: cosh(x),
            inv_c,
            one_minus_inv_c,
            one_minus_inv_c2: th * th,
        }
    }
}

/// Paired pre/post-quench data of one momentum `k > 0` plus the derived
/// echo ingredients.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ModeEntry {
    pub pre: ModeQuantities,
    pub post: ModeQuantities,
    /// `θ¹ − θ⁰`, wrapped into `(-π, π]`.
    pub dtheta: f64,
    /// `sin²(Δθ)`.
    pub alpha: f64,
    /// `cosh(βΛ⁰)`; `+∞` at zero temperature or past overflow.
    pub c: f64,
    /// `1/c`, always finite.
    pub inv_c: f64,
    /// `1 − 1/c`.
    pub one_minus_inv_c: f64,
    /// `1 − 1/c²`.
    pub one_minus_inv_c2: f64,
    /// `−(1 − 1/c²) α`.
    pub b: f64,
    /// `2Λ¹`.
    pub omega: f64,
}

impl ModeEntry {
    pub fn new(params: &QuenchParams, k: f64) -> Self {
        let pre = dispersion(params.h0, params.gamma0, k);
        let post = dispersion(params.h1, params.gamma1, k);
        let dtheta = wrap_angle(post.theta - pre.theta);
        let sd = sin(dtheta);
        let alpha = sd * sd;
        let th = ThermalRatios::new(params.temperature, pre.lambda);
        ModeEntry {
            pre,
            post,
            dtheta,
            alpha,
            c: th.c,
            inv_c: th.inv_c,
            one_minus_inv_c: th.one_minus_inv_c,
            one_minus_inv_c2: th.one_minus_inv_c2,
            b: -th.one_minus_inv_c2 * alpha,
            omega: 2.0 * post.lambda,
        }
    }

    pub fn k(&self) -> f64 {
        self.pre.k
    }
}

/// All `L/2` modes of a quench, ordered by increasing momentum.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ModeTable {
    params: QuenchParams,
    modes: Vec<ModeEntry>,
}

impl ModeTable {
    pub fn params(&self) -> &QuenchParams {
        &self.params
    }

    pub fn modes(&self) -> &[ModeEntry] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn iter(&self) -> core::slice::Iter<'_, ModeEntry> {
        self.modes.iter()
    }
}

impl<'a> IntoIterator for &'a ModeTable {
    type Item = &'a ModeEntry;
    type IntoIter = core::slice::Iter<'a, ModeEntry>;

    fn into_iter(self) -> Self::IntoIter {
        self.modes.iter()
    }
}

pub fn mode_table(params: &QuenchParams) -> Result<ModeTable> {
    params.validate()?;
    let modes = momenta(params.length)?
        .into_iter()
        .map(|k| ModeEntry::new(params, k))
        .collect();
    Ok(ModeTable {
        params: *params,
        modes,
    })
}

/// `sin²(θ¹ − θ⁰)` written directly in the Hamiltonian parameters:
///
/// `sin²k · [(γ¹−γ⁰) cos k + (γ¹h⁰ − γ⁰h¹)]² / (Λ⁰Λ¹)²`.
pub fn sin2_dtheta_explicit(params: &QuenchParams, k: f64) -> Result<f64> {
    let l0 = dispersion(params.h0, params.gamma0, k).lambda;
    let l1 = dispersion(params.h1, params.gamma1, k).lambda;
    let denom = l0 * l1;
    if denom == 0.0 {
        return Err(Error::GaplessMode { k });
    }
    let num = sin(k)
        * ((params.gamma1 - params.gamma0) * cos(k)
            + (params.gamma1 * params.h0 - params.gamma0 * params.h1));
    let r = num / denom;
    Ok(r * r)
}
