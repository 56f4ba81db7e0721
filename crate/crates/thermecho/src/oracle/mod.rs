//! Dense exact-diagonalization reference.
//!
//! Everything here works with explicit matrices on the full fermionic Fock
//! space (at most 4096 states) and is meant for checking the closed-form
//! results of `thermecho-core`, not for production runs.

mod appendix;
mod dense;
mod fidelity;
mod fock;
mod perturbation;

pub use appendix::{
    q_function, q_function_direct, q_function_scan, qubit_inequality_check, QScan, QubitReport,
};
pub use dense::{random_hermitian, CMatrix, DenseOperator, SpectralData, DEGENERACY_TOL};
pub use fidelity::{
    dephase, exact_le, gibbs, hs_overlap, nuclear_norm, purity, sqrt_psd, time_average_state,
    uhlmann, DenseQuench,
};
pub use fock::{build_quasifree, MAX_LENGTH};
pub use perturbation::{
    bures_decomposition, damping_generic, fidelity_weights, perturbative_le, BuresDecomposition,
    DampingReport, Perturbation, PerturbationReport,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("chain length {0} exceeds the dense cap of {MAX_LENGTH}")]
    TooLarge(usize),

    #[error("operator is not Hermitian (max |M - M†| = {0:e})")]
    NotHermitian(f64),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("not a density operator: eigenvalue {0:e}")]
    InvalidState(f64),

    #[error("{0} did not converge")]
    NoConvergence(&'static str),

    #[error("spectrum is degenerate (min gap {0:e})")]
    Degenerate(f64),

    #[error(transparent)]
    Core(#[from] thermecho_core::Error),
}

pub type Result<T, E = OracleError> = std::result::Result<T, E>;
