use num_complex::Complex64;

use super::dense::{cmul, to_faer, CMatrix, DenseOperator, SpectralData};
use super::{OracleError, Result};

/// Eigenvalues of a density operator below this are rejected.
const NEGATIVE_TOL: f64 = 1e-8;

/// Eigenvalues below this are rounding noise of a rank-deficient state; their
/// square roots (~1e-8) would otherwise leak into the fidelity.
const PSD_ZERO: f64 = 1e-14;

/// Gibbs state `e^{−βH}/Z`, built from the spectrum of `H`.
pub fn gibbs(h: &DenseOperator, beta: f64) -> Result<DenseOperator> {
    let spec = SpectralData::of(h)?;
    Ok(DenseOperator::new(gibbs_from(&spec, beta)))
}

pub(crate) fn gibbs_from(spec: &SpectralData, beta: f64) -> CMatrix {
    spectral_fn(spec, &spec.gibbs_weights(beta), |p| p)
}

/// `W g(p_n) W†` for weights attached to the eigenbasis of `spec`.
fn spectral_fn(spec: &SpectralData, weights: &[f64], g: impl Fn(f64) -> f64) -> CMatrix {
    let mut scaled = spec.vectors.clone();
    for (i, &p) in weights.iter().enumerate() {
        let f = Complex64::from(g(p));
        scaled.column_mut(i).iter_mut().for_each(|z| *z *= f);
    }
    cmul(&scaled, &spec.vectors.adjoint())
}

/// Square root of a positive semidefinite matrix; eigenvalues in
/// `(−1e-8, 1e-14)` are clamped to zero.
pub fn sqrt_psd(rho: &CMatrix) -> Result<CMatrix> {
    let spec = SpectralData::of(&DenseOperator::hermitian(rho.clone())?)?;
    if let Some(&bad) = spec.energies.iter().find(|&&e| e < -NEGATIVE_TOL) {
        return Err(OracleError::InvalidState(bad));
    }
    let ev = spec.energies.clone();
    Ok(spectral_fn(&spec, &ev, |e| if e < PSD_ZERO { 0.0 } else { e.sqrt() }))
}

/// Trace norm `Σ σ_i`, from the singular values.
pub fn nuclear_norm(m: &CMatrix) -> f64 {
    match to_faer(m).singular_values() {
        Ok(s) => s.iter().sum(),
        Err(_) => m.clone().singular_values().sum(),
    }
}

/// Uhlmann fidelity `(Tr sqrt(√ρ σ √ρ))²`.
///
/// Evaluated as `‖√ρ √σ‖₁²`, which equals the defining expression but never
/// takes the square root of a nearly singular product.
pub fn uhlmann(rho: &CMatrix, sigma: &CMatrix) -> Result<f64> {
    if rho.shape() != sigma.shape() {
        return Err(OracleError::DimensionMismatch(rho.nrows(), sigma.nrows()));
    }
    let n = nuclear_norm(&cmul(&sqrt_psd(rho)?, &sqrt_psd(sigma)?));
    Ok(n * n)
}

/// `Tr ρ²` for Hermitian `ρ`.
pub fn purity(rho: &CMatrix) -> f64 {
    rho.iter().map(|z| z.norm_sqr()).sum()
}

/// `Re Tr[A B]`.
pub fn hs_overlap(a: &CMatrix, b: &CMatrix) -> f64 {
    a.transpose().iter().zip(b.iter()).map(|(x, y)| (x * y).re).sum()
}

/// Dephased state `Σ_n |ψ_n⟩⟨ψ_n| ρ |ψ_n⟩⟨ψ_n|` in the eigenbasis of `h1`;
/// fails on a degenerate spectrum.
pub fn dephase(rho0: &CMatrix, h1: &DenseOperator) -> Result<CMatrix> {
    let spec = SpectralData::of(h1)?;
    spec.require_nondegenerate()?;
    Ok(time_average_state(rho0, &spec))
}

/// Infinite-time average of `e^{−iHt} ρ e^{iHt}`: the projection of `ρ` onto
/// the blocks of (numerically) equal energy. On a non-degenerate spectrum
/// this is the dephased state.
pub fn time_average_state(rho0: &CMatrix, spec: &SpectralData) -> CMatrix {
    let r = spec.in_eigenbasis(rho0);
    let mut pinched = CMatrix::zeros(r.nrows(), r.ncols());
    for c in spec.clusters() {
        for i in c.clone() {
            for j in c.clone() {
                pinched[(i, j)] = r[(i, j)];
            }
        }
    }
    cmul(&cmul(&spec.vectors, &pinched), &spec.vectors.adjoint())
}

/// A quench `H0 → H1` from the Gibbs state of `H0`, with the spectral data
/// needed to evolve it cached.
#[derive(Debug, Clone)]
pub struct DenseQuench {
    pub spec0: SpectralData,
    pub spec1: SpectralData,
    pub rho: CMatrix,
    sqrt_rho: CMatrix,
    /// `ρ` and `√ρ` in the eigenbasis of `H1`.
    rho_eig1: CMatrix,
    sqrt_rho_eig1: CMatrix,
}

impl DenseQuench {
    pub fn new(h0: &DenseOperator, h1: &DenseOperator, beta: f64) -> Result<Self> {
        if h0.dim() != h1.dim() {
            return Err(OracleError::DimensionMismatch(h0.dim(), h1.dim()));
        }
        let spec0 = SpectralData::of(h0)?;
        let spec1 = SpectralData::of(h1)?;
        let p = spec0.gibbs_weights(beta);
        let rho = spectral_fn(&spec0, &p, |x| x);
        let sqrt_rho = spectral_fn(&spec0, &p, f64::sqrt);
        let rho_eig1 = spec1.in_eigenbasis(&rho);
        let sqrt_rho_eig1 = spec1.in_eigenbasis(&sqrt_rho);
        Ok(DenseQuench {
            spec0,
            spec1,
            rho,
            sqrt_rho,
            rho_eig1,
            sqrt_rho_eig1,
        })
    }

    fn phases(&self, t: f64) -> Vec<Complex64> {
        self.spec1
            .energies
            .iter()
            .map(|&x| Complex64::new(0.0, -x * t).exp())
            .collect()
    }

    fn rotate(&self, m_eig1: &CMatrix, t: f64) -> CMatrix {
        // U M U† in the H1 eigenbasis is M_{mn} e^{−i(E_m − E_n)t}.
        let phases = self.phases(t);
        let mut out = m_eig1.clone();
        for j in 0..out.ncols() {
            for i in 0..out.nrows() {
                out[(i, j)] *= phases[i] * phases[j].conj();
            }
        }
        cmul(&cmul(&self.spec1.vectors, &out), &self.spec1.vectors.adjoint())
    }

    /// `ρ(t) = U ρ U†` with `U = e^{−iH₁t}`.
    pub fn evolved(&self, t: f64) -> CMatrix {
        self.rotate(&self.rho_eig1, t)
    }

    /// Uhlmann fidelity between `ρ(t)` and `ρ`.
    ///
    /// `√ρ(t) √ρ = W P S P† S W†` with `S = √ρ` in the `H1` eigenbasis `W` and
    /// `P = e^{−iEt}`, so its singular values are those of `S P† S`.
    pub fn loschmidt(&self, t: f64) -> f64 {
        let phases = self.phases(t);
        let mut right = self.sqrt_rho_eig1.clone();
        for j in 0..right.ncols() {
            for i in 0..right.nrows() {
                right[(i, j)] *= phases[i].conj();
            }
        }
        let n = nuclear_norm(&cmul(&self.sqrt_rho_eig1, &right));
        n * n
    }

    /// `Tr[ρ(t) ρ] = Σ_{mn} |ρ_{mn}|² cos((E_m − E_n) t)` in the `H1` basis.
    pub fn linearized(&self, t: f64) -> f64 {
        let e = &self.spec1.energies;
        let r = &self.rho_eig1;
        let mut sum = 0.0;
        for j in 0..r.ncols() {
            for i in 0..r.nrows() {
                sum += r[(i, j)].norm_sqr() * ((e[i] - e[j]) * t).cos();
            }
        }
        sum
    }

    pub fn purity(&self) -> f64 {
        purity(&self.rho)
    }

    pub fn time_average_state(&self) -> CMatrix {
        time_average_state(&self.rho, &self.spec1)
    }

    /// `Tr ρ̄²` of the time-averaged state.
    pub fn dephased_purity(&self) -> f64 {
        purity(&self.time_average_state())
    }

    pub fn sqrt_rho(&self) -> &CMatrix {
        &self.sqrt_rho
    }
}

/// Uhlmann fidelity between `ρ(t)` and `ρ` for `ρ` the Gibbs state of `h0`.
pub fn exact_le(h0: &DenseOperator, h1: &DenseOperator, beta: f64, t: f64) -> Result<f64> {
    Ok(DenseQuench::new(h0, h1, beta)?.loschmidt(t))
}
