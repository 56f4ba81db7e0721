//! Second-order perturbation theory of the echo for a generic quench
//! `H1 = H0 + V` from a Gibbs state, and the Bures-metric split into a
//! classical (Fisher–Rao) and a non-classical part.

use nalgebra::DMatrix;

use super::dense::{DenseOperator, SpectralData, DEGENERACY_TOL};
use super::{OracleError, Result};

/// Perturbative data of a quench, built once and evaluated at any time.
#[derive(Debug, Clone)]
pub struct Perturbation {
    pub spec0: SpectralData,
    /// Eigenvalues of `H0 + V`, ascending.
    pub energies1: Vec<f64>,
    pub weights: Vec<f64>,
    /// `C_{n,m} = (p_m − p_n)²/(p_m + p_n) · |V_{mn}|²/(E_m − E_n)²`.
    pub c: DMatrix<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationReport {
    pub lbar: f64,
    pub bures: BuresDecomposition,
    pub damping: DampingReport,
}

impl Perturbation {
    pub fn new(h0: &DenseOperator, v: &DenseOperator, beta: f64) -> Result<Self> {
        if h0.dim() != v.dim() {
            return Err(OracleError::DimensionMismatch(h0.dim(), v.dim()));
        }
        let spec0 = SpectralData::of(h0)?;
        spec0.require_nondegenerate()?;
        let energies1 = SpectralData::of(&(h0 + v))?.energies;
        let weights = spec0.gibbs_weights(beta);
        let c = transition_weights(&spec0, &weights, v);
        Ok(Perturbation {
            spec0,
            energies1,
            weights,
            c,
        })
    }

    /// `1 − Σ_{n≠m} C_{n,m} [1 − cos((E¹_m − E¹_n) t)]`.
    ///
    /// Eigenvalues of `H0` and `H0 + V` are both in ascending order, so they
    /// are matched level by level.
    pub fn le(&self, t: f64) -> f64 {
        let e = &self.energies1;
        let n = e.len();
        let mut loss = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    loss += self.c[(i, j)] * (1.0 - ((e[j] - e[i]) * t).cos());
                }
            }
        }
        1.0 - loss
    }

    /// Time average `1 − Σ_{n≠m} C_{n,m}`.
    pub fn lbar(&self) -> f64 {
        1.0 - self.c.sum()
    }
}

fn transition_weights(spec: &SpectralData, p: &[f64], v: &DenseOperator) -> DMatrix<f64> {
    let vm = spec.in_eigenbasis(v.matrix());
    let e = &spec.energies;
    let n = e.len();
    DMatrix::from_fn(n, n, |i, j| {
        if i == j || p[i] + p[j] == 0.0 {
            return 0.0;
        }
        let dp = p[j] - p[i];
        let de = e[j] - e[i];
        dp * dp / (p[i] + p[j]) * vm[(j, i)].norm_sqr() / (de * de)
    })
}

/// Echo to second order in `V`.
pub fn perturbative_le(h0: &DenseOperator, v: &DenseOperator, beta: f64, t: f64) -> Result<f64> {
    Ok(Perturbation::new(h0, v, beta)?.le(t))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BuresDecomposition {
    /// `ds²_FR/4 + nonclassical`.
    pub ds2: f64,
    /// `Σ_n dp_n²/p_n` with `dp_n = −β p_n (dH_nn − ⟨dH⟩)`.
    pub ds2_fr: f64,
    /// `½ Σ_{n≠m} (p_m − p_n)²/(p_m + p_n) · |dH_{mn}|²/(E_n − E_m)²`.
    pub nonclassical: f64,
}

/// Bures line element between the Gibbs states of `H` and `H + dH`.
pub fn bures_decomposition(h: &DenseOperator, dh: &DenseOperator, beta: f64) -> Result<BuresDecomposition> {
    if h.dim() != dh.dim() {
        return Err(OracleError::DimensionMismatch(h.dim(), dh.dim()));
    }
    let spec = SpectralData::of(h)?;
    spec.require_nondegenerate()?;
    let p = spec.gibbs_weights(beta);
    let d = spec.in_eigenbasis(dh.matrix());
    let mean: f64 = p.iter().enumerate().map(|(i, pi)| pi * d[(i, i)].re).sum();
    let ds2_fr = p
        .iter()
        .enumerate()
        .filter(|(_, &pi)| pi > 0.0)
        .map(|(i, &pi)| {
            let dp = -beta * pi * (d[(i, i)].re - mean);
            dp * dp / pi
        })
        .sum::<f64>();
    let nonclassical = 0.5 * transition_weights(&spec, &p, dh).sum();
    Ok(BuresDecomposition {
        ds2: ds2_fr / 4.0 + nonclassical,
        ds2_fr,
        nonclassical,
    })
}

/// Thermal damping `𝒟_n = p₀ (e^{−βΔ_n} − 1)²/(e^{−βΔ_n} + 1)` of every
/// level relative to the ground state, `Δ_n = E_n − E_0`; entry 0 is zero.
pub fn damping_generic(energies: &[f64], beta: f64) -> Result<Vec<f64>> {
    let mut e = energies.to_vec();
    e.sort_by(f64::total_cmp);
    if e.len() > 1 && e[1] - e[0] <= DEGENERACY_TOL {
        return Err(OracleError::Degenerate(e[1] - e[0]));
    }
    let z: f64 = e.iter().map(|x| (-beta * (x - e[0])).exp()).sum();
    let p0 = 1.0 / z;
    Ok(e
        .iter()
        .map(|x| {
            let b = (-beta * (x - e[0])).exp();
            p0 * (b - 1.0) * (b - 1.0) / (b + 1.0)
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct DampingReport {
    pub damping: Vec<f64>,
    /// `W_{n,0}(0) = 2|V_{n0}|²/Δ_n²`.
    pub w_zero: Vec<f64>,
    /// `W_{n,0}(T) = 𝒟_n W_{n,0}(0)`.
    pub w_thermal: Vec<f64>,
    /// Fidelity susceptibility `Σ_n W_{n,0}(0)`.
    pub chi_f: f64,
}

/// Ground-state transition weights and their thermal damping.
pub fn fidelity_weights(h0: &DenseOperator, v: &DenseOperator, beta: f64) -> Result<DampingReport> {
    let spec = SpectralData::of(h0)?;
    let damping = damping_generic(&spec.energies, beta)?;
    let vm = spec.in_eigenbasis(v.matrix());
    let e = &spec.energies;
    let w_zero: Vec<f64> = (0..e.len())
        .map(|n| {
            if n == 0 {
                0.0
            } else {
                let de = e[n] - e[0];
                2.0 * vm[(n, 0)].norm_sqr() / (de * de)
            }
        })
        .collect();
    let w_thermal = w_zero.iter().zip(&damping).map(|(w, d)| w * d).collect();
    Ok(DampingReport {
        chi_f: w_zero.iter().sum(),
        damping,
        w_zero,
        w_thermal,
    })
}

impl PerturbationReport {
    pub fn new(h0: &DenseOperator, v: &DenseOperator, beta: f64) -> Result<Self> {
        Ok(PerturbationReport {
            lbar: Perturbation::new(h0, v, beta)?.lbar(),
            bures: bures_decomposition(h0, v, beta)?,
            damping: fidelity_weights(h0, v, beta)?,
        })
    }
}
