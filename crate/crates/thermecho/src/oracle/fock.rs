//! Fermionic Fock space of a quasi-free chain.
//!
//! Mode `2p` is `k_p` and mode `2p+1` is `−k_p`, with `k_p` the positive
//! momenta in increasing order. Basis states are occupation bit strings and
//! operators carry the Jordan–Wigner sign `(−1)^{# occupied modes below j}`.
//! Per momentum pair the Hamiltonian is
//! `ε (n_k + n_{−k}) − iΔ c_k† c_{−k}† + iΔ c_{−k} c_k`, so the even block on
//! `{|0⟩, c_k† c_{−k}†|0⟩}` is `ε − Λ (cos θ σ_z + sin θ σ_y)` and the odd
//! block sits at energy `ε`.

use num_complex::Complex64;

use thermecho_core::model::{dispersion, momenta};

use super::dense::{CMatrix, DenseOperator};
use super::{OracleError, Result};

/// Largest chain length the dense oracle accepts (dimension 4096).
pub const MAX_LENGTH: usize = 12;

fn jw_sign(state: usize, j: usize) -> f64 {
    if (state & ((1 << j) - 1)).count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn create(state: usize, j: usize) -> Option<(f64, usize)> {
    (state & (1 << j) == 0).then(|| (jw_sign(state, j), state | (1 << j)))
}

fn annihilate(state: usize, j: usize) -> Option<(f64, usize)> {
    (state & (1 << j) != 0).then(|| (jw_sign(state, j), state & !(1 << j)))
}

#[derive(Clone, Copy)]
enum Op {
    Create(usize),
    Annihilate(usize),
}

/// Applies a product of ladder operators, rightmost first.
fn apply(ops: &[Op], state: usize) -> Option<(f64, usize)> {
    ops.iter().rev().try_fold((1.0, state), |(sign, s), op| {
        let (sg, next) = match *op {
            Op::Create(j) => create(s, j)?,
            Op::Annihilate(j) => annihilate(s, j)?,
        };
        Some((sign * sg, next))
    })
}

/// Dense Hamiltonian of the XY chain with field `h` and anisotropy `gamma`
/// on the `2^length` dimensional mode Fock space.
pub fn build_quasifree(h: f64, gamma: f64, length: usize) -> Result<DenseOperator> {
    if length > MAX_LENGTH {
        return Err(OracleError::TooLarge(length));
    }
    let ks = momenta(length)?;
    let dim = 1usize << length;
    let mut terms: Vec<(Complex64, Vec<Op>)> = Vec::new();
    for (p, &k) in ks.iter().enumerate() {
        let m = dispersion(h, gamma, k);
        let (a, b) = (2 * p, 2 * p + 1);
        let eps = Complex64::from(m.eps);
        terms.push((eps, vec![Op::Create(a), Op::Annihilate(a)]));
        terms.push((eps, vec![Op::Create(b), Op::Annihilate(b)]));
        terms.push((Complex64::new(0.0, -m.delta), vec![Op::Create(a), Op::Create(b)]));
        terms.push((Complex64::new(0.0, m.delta), vec![Op::Annihilate(b), Op::Annihilate(a)]));
    }
    let mut mat = CMatrix::zeros(dim, dim);
    for state in 0..dim {
        for (coef, ops) in &terms {
            if let Some((sign, out)) = apply(ops, state) {
                mat[(out, state)] += coef * sign;
            }
        }
    }
    DenseOperator::hermitian(mat)
}
