//! Infinite-time averages of the echo and its variance.
//!
//! With `σ = sin²(Λ¹t)` each mode factor of `L(t)` is a power series
//! `1 + Σ_m h^(m) σ^m`, and for rationally independent frequencies the time
//! average of `σ^m` is `w_m = binom(2m, m)/4^m`. Products over modes then
//! factor into per-mode averages.

use alloc::vec::Vec;

use core::f64::consts::FRAC_2_PI;

use libm::{exp, expm1, log1p};

use crate::echo::{effective_dimension, LOG_SPACE_LENGTH};
use crate::model::{ModeEntry, ModeTable};
use crate::special::elliptic_e_unchecked;
use crate::{Error, Result};

pub const SERIES_TOL: f64 = 1e-15;
pub const SERIES_MAX_TERMS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AverageReport {
    pub d_eff: f64,
    /// Time-averaged echo.
    pub mean_le: f64,
    /// Time-averaged linearized echo, equal to the equilibrium purity.
    pub mean_lef: f64,
    /// `None` when a per-mode series fails to converge.
    pub var_le: Option<f64>,
    pub smallquench_var: f64,
    pub equilibrium_purity: f64,
}

fn product(length: usize, factors: impl Iterator<Item = f64>) -> f64 {
    if length > LOG_SPACE_LENGTH {
        exp(factors.map(|f| log1p(f - 1.0)).sum::<f64>())
    } else {
        factors.product()
    }
}

/// `g_k = 2s/(1+s)² · [(2/π) E(−b) − b/4 − 1]` with `s = 1/c`.
fn g_term(m: &ModeEntry) -> f64 {
    let s = m.inv_c;
    if s == 0.0 {
        return 0.0;
    }
    let bracket = FRAC_2_PI * elliptic_e_unchecked(-m.b) - 0.25 * m.b - 1.0;
    2.0 * s / ((1.0 + s) * (1.0 + s)) * bracket
}

/// `G^(1)` of one mode in closed form: `−(1−1/c)α/2 + g`.
fn mean_excess_closed(m: &ModeEntry) -> f64 {
    -0.5 * m.one_minus_inv_c * m.alpha + g_term(m)
}

/// Time-averaged echo `∏_k [1 − (1−1/c_k)α_k/2 + g_k]`.
pub fn avg_loschmidt(table: &ModeTable) -> f64 {
    product(table.params().length, table.iter().map(|m| 1.0 + mean_excess_closed(m)))
}

/// Coefficients `h^(m)` of one mode together with the weights `w_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSeries {
    pub h: Vec<f64>,
    pub w: Vec<f64>,
}

impl ModeSeries {
    /// `G^(1) = Σ_m h^(m) w_m`.
    pub fn mean_excess(&self) -> f64 {
        self.h.iter().zip(&self.w).map(|(h, w)| h * w).sum()
    }

    /// Time variance of the mode factor, `Σ_{m,n} h^(m) h^(n) (w_{m+n} − w_m w_n)`.
    ///
    /// Every coefficient in the double sum is a covariance of powers of `σ`,
    /// so no two large terms cancel.
    pub fn excess_variance(&self) -> f64 {
        let n = self.h.len();
        let w = time_average_weights(2 * n);
        let mut total = 0.0;
        for i in 0..n {
            let mut row = 0.0;
            for j in 0..n {
                row += self.h[j] * (w[i + j + 1] - w[i] * w[j]);
            }
            total += self.h[i] * row;
        }
        total
    }

    /// `G^(2) = 2 G^(1) + Σ_m w_m Σ_{n=1}^{m−1} h^(n) h^(m−n)`.
    pub fn second_moment_excess(&self) -> f64 {
        let g1 = self.mean_excess();
        g1 * (2.0 + g1) + self.excess_variance()
    }
}

/// `w_m = binom(2m, m)/4^m` for `m = 1..=n`, by the running product
/// `w_m = w_{m−1}(2m−1)/(2m)`.
pub fn time_average_weights(n: usize) -> Vec<f64> {
    let mut w = Vec::with_capacity(n);
    let mut cur = 1.0;
    for m in 1..=n {
        cur *= (2 * m - 1) as f64 / (2 * m) as f64;
        w.push(cur);
    }
    w
}

/// Series coefficients of mode `index`: `h^(1) = −(1−1/c)α` and
/// `h^(m) = 2s/(1+s)² · binom(1/2, m) b^m` for `m > 1`, truncated once a
/// term of `Σ h^(m) w_m` falls below [`SERIES_TOL`] relative to the sum.
pub fn mode_series(m: &ModeEntry, index: usize) -> Result<ModeSeries> {
    let s = m.inv_c;
    let pref = 2.0 * s / ((1.0 + s) * (1.0 + s));
    let h1 = -m.one_minus_inv_c * m.alpha;
    let mut h = alloc::vec![h1];
    let mut w = alloc::vec![0.5];
    if pref == 0.0 || m.b == 0.0 {
        return Ok(ModeSeries { h, w });
    }
    let mut sum = 0.5 * h1;
    // binom(1/2, 1) b
    let mut binom_b = 0.5 * m.b;
    let mut wm = 0.5;
    for k in 2..=SERIES_MAX_TERMS {
        let kf = k as f64;
        binom_b *= (0.5 - (kf - 1.0)) / kf * m.b;
        wm *= (2.0 * kf - 1.0) / (2.0 * kf);
        let hk = pref * binom_b;
        h.push(hk);
        w.push(wm);
        let term = hk * wm;
        sum += term;
        if term.abs() <= SERIES_TOL * sum.abs() {
            return Ok(ModeSeries { h, w });
        }
    }
    Err(Error::SeriesNotConverged {
        mode: index,
        terms: SERIES_MAX_TERMS,
    })
}

fn all_series(table: &ModeTable) -> Result<Vec<ModeSeries>> {
    table.iter().enumerate().map(|(i, m)| mode_series(m, i)).collect()
}

/// Time-averaged echo `∏_k (1 + G_k^(1))` from the moment series.
pub fn avg_loschmidt_series(table: &ModeTable) -> Result<f64> {
    let series = all_series(table)?;
    Ok(product(
        table.params().length,
        series.iter().map(|s| 1.0 + s.mean_excess()),
    ))
}

/// Time average of `L(t)²`, `∏_k (1 + G_k^(2))`.
pub fn second_moment(table: &ModeTable) -> Result<f64> {
    let series = all_series(table)?;
    Ok(product(
        table.params().length,
        series.iter().map(|s| 1.0 + s.second_moment_excess()),
    ))
}

/// Time variance of `L(t)`.
///
/// Written as `∏(1+G^(1))² · (∏(1 + D/(1+G^(1))²) − 1)` with `D` the
/// per-mode excess variance, so neither exponentially small moment is
/// subtracted directly.
pub fn variance_le(table: &ModeTable) -> Result<f64> {
    let series = all_series(table)?;
    let mut ln_mean = 0.0;
    let mut ln_ratio = 0.0;
    for s in &series {
        let g1 = s.mean_excess();
        let one = 1.0 + g1;
        ln_mean += log1p(g1);
        ln_ratio += log1p(s.excess_variance() / (one * one));
    }
    Ok(exp(2.0 * ln_mean) * expm1(ln_ratio))
}

/// Lowest-order variance `(1/8) Σ_k (1 − 1/c_k)² Δθ_k⁴`.
pub fn smallquench_variance(table: &ModeTable) -> f64 {
    table
        .iter()
        .map(|m| {
            let a = m.one_minus_inv_c * m.dtheta * m.dtheta;
            a * a
        })
        .sum::<f64>()
        / 8.0
}

/// Time-averaged linearized echo `d_eff⁻¹ ∏_k [1 − (1−1/c_k²)α_k/2]`, the
/// purity of the dephased state.
pub fn avg_linearized(table: &ModeTable) -> f64 {
    product(
        table.params().length,
        table.iter().map(|m| {
            let r = 1.0 / (1.0 + m.inv_c);
            r * r * (1.0 + 0.5 * m.b)
        }),
    )
}

pub fn report(table: &ModeTable) -> AverageReport {
    let mean_lef = avg_linearized(table);
    AverageReport {
        d_eff: effective_dimension(table).d_eff,
        mean_le: avg_loschmidt(table),
        mean_lef,
        var_le: variance_le(table).ok(),
        smallquench_var: smallquench_variance(table),
        equilibrium_purity: mean_lef,
    }
}
