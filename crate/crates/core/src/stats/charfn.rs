use alloc::vec::Vec;

use num_complex::Complex64;

use super::weights::WeightSpectrum;
use crate::special::bessel_j0;

/// `∏_k J0(|λ a_k|)` on each `λ` of the grid: the characteristic function of
/// `Σ_k a_k cos(ω_k t)` for rationally independent `ω_k`.
pub fn char_fn(spectrum: &WeightSpectrum, lambdas: &[f64]) -> Vec<f64> {
    lambdas
        .iter()
        .map(|&l| spectrum.a().map(|a| bessel_j0(l * a)).product())
        .collect()
}

/// Sample average of `exp(iλ(z − center))` on each `λ` of the grid.
pub fn empirical_char_fn(z: &[f64], center: f64, lambdas: &[f64]) -> Vec<Complex64> {
    let n = z.len() as f64;
    lambdas
        .iter()
        .map(|&l| {
            z.iter()
                .map(|&zi| Complex64::new(0.0, l * (zi - center)).exp())
                .sum::<Complex64>()
                / n
        })
        .collect()
}

/// `sup_λ |empirical − analytic|` over the grid, centering the samples on
/// their own mean.
pub fn max_char_fn_deviation(spectrum: &WeightSpectrum, z: &[f64], lambdas: &[f64]) -> f64 {
    let center = z.iter().sum::<f64>() / z.len() as f64;
    let emp = empirical_char_fn(z, center, lambdas);
    char_fn(spectrum, lambdas)
        .into_iter()
        .zip(emp)
        .map(|(a, e)| (e - a).norm())
        .fold(0.0, f64::max)
}
