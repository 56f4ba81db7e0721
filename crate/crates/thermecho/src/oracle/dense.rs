use std::ops::Range;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{OracleError, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Eigenvalues closer than this are treated as one degenerate level.
pub const DEGENERACY_TOL: f64 = 1e-10;

const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    matrix: CMatrix,
    hermitian: bool,
}

fn hermiticity_defect(m: &CMatrix) -> f64 {
    let adj = m.adjoint();
    m.iter()
        .zip(adj.iter())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max)
}

impl DenseOperator {
    pub fn new(matrix: CMatrix) -> Self {
        let hermitian = matrix.is_square() && hermiticity_defect(&matrix) < HERMITIAN_TOL;
        DenseOperator { matrix, hermitian }
    }

    /// Wraps a matrix that must be Hermitian.
    pub fn hermitian(matrix: CMatrix) -> Result<Self> {
        let op = Self::new(matrix);
        if op.hermitian {
            Ok(op)
        } else {
            Err(OracleError::NotHermitian(hermiticity_defect(&op.matrix)))
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }
}

impl std::ops::Add<&DenseOperator> for &DenseOperator {
    type Output = DenseOperator;

    fn add(self, rhs: &DenseOperator) -> DenseOperator {
        DenseOperator::new(&self.matrix + &rhs.matrix)
    }
}

/// Eigen-decomposition of a Hermitian operator, ascending, with each
/// eigenvector's first non-negligible component made real and positive.
#[derive(Debug, Clone)]
pub struct SpectralData {
    pub energies: Vec<f64>,
    pub vectors: CMatrix,
}

impl SpectralData {
    pub fn of(op: &DenseOperator) -> Result<Self> {
        if !op.is_hermitian() {
            return Err(OracleError::NotHermitian(hermiticity_defect(op.matrix())));
        }
        let n = op.dim();
        let eig = to_faer(op.matrix())
            .self_adjoint_eigen(faer::Side::Lower)
            .map_err(|_| OracleError::NoConvergence("Hermitian eigendecomposition"))?;
        let values: Vec<f64> = (0..n).map(|i| eig.S()[i].re).collect();
        let u = from_faer(eig.U());
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let energies = order.iter().map(|&i| values[i]).collect();
        let mut vectors = CMatrix::zeros(n, n);
        for (col, &i) in order.iter().enumerate() {
            let v = u.column(i);
            let scale = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let pivot = v.iter().find(|z| z.norm() > 1e-8 * scale).copied();
            let phase = pivot.map_or(Complex64::new(1.0, 0.0), |z| z.conj() / z.norm());
            vectors.set_column(col, &(v * phase));
        }
        Ok(SpectralData { energies, vectors })
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    /// Normalized Boltzmann weights `e^{−βE_n}/Z`.
    pub fn gibbs_weights(&self, beta: f64) -> Vec<f64> {
        let e0 = self.energies[0];
        let w: Vec<f64> = self.energies.iter().map(|e| (-beta * (e - e0)).exp()).collect();
        let z: f64 = w.iter().sum();
        w.into_iter().map(|x| x / z).collect()
    }

    pub fn min_gap(&self) -> f64 {
        self.energies
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }

    pub fn require_nondegenerate(&self) -> Result<()> {
        let gap = self.min_gap();
        if gap > DEGENERACY_TOL {
            Ok(())
        } else {
            Err(OracleError::Degenerate(gap))
        }
    }

    /// Largest `‖H v − E v‖` over all eigenpairs.
    pub fn residual(&self, op: &DenseOperator) -> f64 {
        (0..self.dim())
            .map(|i| {
                let v = self.vectors.column(i);
                (op.matrix() * v - v * Complex64::from(self.energies[i])).norm()
            })
            .fold(0.0, f64::max)
    }

    /// `W f(E) W†`.
    pub fn apply_fn<F: Fn(f64) -> Complex64>(&self, f: F) -> CMatrix {
        let mut scaled = self.vectors.clone();
        for (i, &e) in self.energies.iter().enumerate() {
            let fe = f(e);
            for z in scaled.column_mut(i).iter_mut() {
                *z *= fe;
            }
        }
        cmul(&scaled, &self.vectors.adjoint())
    }

    /// Matrix elements `⟨m|M|n⟩` in the eigenbasis.
    pub fn in_eigenbasis(&self, m: &CMatrix) -> CMatrix {
        cmul(&cmul(&self.vectors.adjoint(), m), &self.vectors)
    }

    /// Index ranges of eigenvalues within [`DEGENERACY_TOL`] of their
    /// neighbours.
    pub fn clusters(&self) -> Vec<Range<usize>> {
        let mut out = Vec::new();
        let mut start = 0;
        for i in 1..=self.dim() {
            if i == self.dim() || self.energies[i] - self.energies[i - 1] > DEGENERACY_TOL {
                out.push(start..i);
                start = i;
            }
        }
        out
    }
}

pub(crate) fn to_faer(m: &CMatrix) -> faer::Mat<faer::c64> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| {
        let z = m[(i, j)];
        faer::c64::new(z.re, z.im)
    })
}

fn from_faer(m: faer::MatRef<'_, faer::c64>) -> CMatrix {
    CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| {
        let z = m[(i, j)];
        Complex64::new(z.re, z.im)
    })
}

/// Complex product through four real products, which run on the blocked
/// real kernel instead of the generic complex one.
pub fn cmul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ai) = (a.map(|z| z.re), a.map(|z| z.im));
    let (br, bi) = (b.map(|z| z.re), b.map(|z| z.im));
    let re = &ar * &br - &ai * &bi;
    let im = &ar * &bi + &ai * &br;
    re.zip_map(&im, Complex64::new)
}

/// Gaussian Hermitian matrix `(X + X†)/2` with standard complex normal
/// entries, scaled by `scale`.
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, scale: f64, rng: &mut R) -> DenseOperator {
    let x = CMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    });
    let h = (&x + x.adjoint()) * Complex64::from(0.5 * scale);
    DenseOperator::new(h)
}
