use alloc::vec::Vec;

use crate::model::{ModeTable, ThermalRatios};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ModeWeight {
    pub k: f64,
    /// `(1 − 1/c) x/2`, with `x = sin²Δθ` or `Δθ²`.
    pub a: f64,
    /// `(1 − 1/c²) x/2`.
    pub a_f: f64,
    pub omega: f64,
    /// Bare weight `x/2`, the zero-temperature value of `a`.
    pub bare: f64,
    /// `1 − 1/c`.
    pub damping: f64,
    /// `1 − 1/c²`.
    pub damping_f: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WeightSpectrum {
    pub modes: Vec<ModeWeight>,
    pub second_order: bool,
}

impl WeightSpectrum {
    pub fn a(&self) -> impl Iterator<Item = f64> + '_ {
        self.modes.iter().map(|m| m.a)
    }

    pub fn total(&self) -> f64 {
        self.a().sum()
    }

    /// Second-order mean `Z̄ = −Σ a_k`.
    pub fn z_bar(&self) -> f64 {
        -self.total()
    }

    /// `κ₂ = ½ Σ a_k²`, the variance of `Σ a_k cos(ω_k t)`.
    pub fn kappa2(&self) -> f64 {
        0.5 * self.a().map(|a| a * a).sum::<f64>()
    }

    /// Weights sorted in decreasing order.
    pub fn sorted(&self) -> Vec<f64> {
        let mut a: Vec<f64> = self.a().collect();
        a.sort_unstable_by(|x, y| y.total_cmp(x));
        a
    }
}

/// Small-quench weights of every mode.
///
/// `second_order` selects `Δθ²` instead of `sin²Δθ`; the angle jump is
/// already wrapped into `(−π, π]`.
pub fn weights(table: &ModeTable, second_order: bool) -> WeightSpectrum {
    let modes = table
        .iter()
        .map(|m| {
            let x = if second_order {
                m.dtheta * m.dtheta
            } else {
                m.alpha
            };
            ModeWeight {
                k: m.k(),
                a: 0.5 * m.one_minus_inv_c * x,
                a_f: 0.5 * m.one_minus_inv_c2 * x,
                omega: m.omega,
                bare: 0.5 * x,
                damping: m.one_minus_inv_c,
                damping_f: m.one_minus_inv_c2,
            }
        })
        .collect();
    WeightSpectrum {
        modes,
        second_order,
    }
}

/// Temperature-damping factor `1 − cosh(ω/T)^(−order)`.
pub fn damping(omega: f64, temperature: f64, order: u32) -> Result<f64> {
    if !(temperature > 0.0 && temperature.is_finite()) {
        return Err(Error::InvalidTemperature(temperature));
    }
    let th = ThermalRatios::from_x(omega / temperature);
    match order {
        1 => Ok(th.one_minus_inv_c),
        2 => Ok(th.one_minus_inv_c2),
        _ => Err(Error::InvalidDampingOrder(order)),
    }
}
