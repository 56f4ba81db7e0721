//! Numerical checks of the two auxiliary inequalities behind the echo
//! bounds: the single-qubit inequality `Tr[UρU†ρ]/Tr ρ² ≤ F(ρ, UρU†)` and
//! non-negativity of the function `Q(x, v)`.

use nalgebra::Vector3;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::dense::{random_hermitian, CMatrix, SpectralData};
use super::fidelity::{hs_overlap, purity, uhlmann};
use super::Result;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct QubitReport {
    pub trials: usize,
    /// Trials with `Tr ρ² · F − Tr[ρσ] < −1e-12`.
    pub violations: usize,
    pub worst_slack: f64,
    /// Largest deviation of the slack from `v²(1 − cos θ)(1 − v²)/4`.
    pub max_closed_form_error: f64,
}

fn qubit_state(r: Vector3<f64>) -> CMatrix {
    let h = |x: f64| Complex64::new(0.5 * x, 0.0);
    CMatrix::from_row_slice(
        2,
        2,
        &[h(1.0 + r.z), Complex64::new(0.5 * r.x, -0.5 * r.y), Complex64::new(0.5 * r.x, 0.5 * r.y), h(1.0 - r.z)],
    )
}

fn bloch(rho: &CMatrix) -> Vector3<f64> {
    Vector3::new(2.0 * rho[(1, 0)].re, 2.0 * rho[(1, 0)].im, (rho[(0, 0)] - rho[(1, 1)]).re)
}

fn random_unitary(rng: &mut ChaCha8Rng) -> Result<CMatrix> {
    let h = random_hermitian(2, 3.0, rng);
    Ok(SpectralData::of(&h)?.apply_fn(|e| Complex64::new(0.0, -e).exp()))
}

/// Samples `n` random states (uniform in the Bloch ball) and random unitaries
/// and compares the dense Uhlmann fidelity with the qubit inequality.
pub fn qubit_inequality_check(n: usize, seed: u64) -> Result<QubitReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = QubitReport {
        trials: n,
        violations: 0,
        worst_slack: f64::INFINITY,
        max_closed_form_error: 0.0,
    };
    for _ in 0..n {
        let dir = Vector3::from_fn(|_, _| rng.sample::<f64, _>(StandardNormal)).normalize();
        let v = rng.random::<f64>().cbrt();
        let rho = qubit_state(dir * v);
        let u = random_unitary(&mut rng)?;
        let sigma = &u * &rho * u.adjoint();
        let f = uhlmann(&rho, &sigma)?;
        let slack = purity(&rho) * f - hs_overlap(&rho, &sigma);

        let (r, s) = (bloch(&rho), bloch(&sigma));
        let cos = if v > 0.0 { (r.dot(&s) / (v * v)).clamp(-1.0, 1.0) } else { 1.0 };
        let closed = v * v * (1.0 - cos) * (1.0 - v * v) / 4.0;

        report.worst_slack = report.worst_slack.min(slack);
        report.max_closed_form_error = report.max_closed_form_error.max((slack - closed).abs());
        if slack < -1e-12 {
            report.violations += 1;
        }
    }
    Ok(report)
}

/// `Q(x, v)` in a cancellation-free form,
/// `2 S² v ((1 + 2C) g + 2C) / ((2C + g)(1 + C)²)` with `C = cosh x`,
/// `S = sinh x` and `g = sqrt(2f)`, `f = 2C² − S² v`.
pub fn q_function(x: f64, v: f64) -> f64 {
    let (c, s) = (x.cosh(), x.sinh());
    let g = (2.0 * (2.0 * c * c - s * s * v)).sqrt();
    2.0 * s * s * v * ((1.0 + 2.0 * c) * g + 2.0 * c) / ((2.0 * c + g) * (1.0 + c) * (1.0 + c))
}

/// `Q(x, v) = ((cosh 2x + 1)/(2(1 + cosh x)²)) (sqrt(2f) + 2)² − 2f` as
/// written; loses absolute accuracy like `e^{2x}` through cancellation.
pub fn q_function_direct(x: f64, v: f64) -> f64 {
    let (c, s) = (x.cosh(), x.sinh());
    let f = 2.0 * c * c - s * s * v;
    let g = (2.0 * f).sqrt();
    ((2.0 * x).cosh() + 1.0) / (2.0 * (1.0 + c) * (1.0 + c)) * (g + 2.0) * (g + 2.0) - 2.0 * f
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct QScan {
    pub points: usize,
    pub min: f64,
    /// `max_x |Q(x, 0)|`.
    pub max_abs_at_zero: f64,
    /// `min_x Q(x, 2)`.
    pub min_at_two: f64,
    /// Interior points where the second difference in `v` is positive
    /// beyond rounding.
    pub concavity_violations: usize,
    /// Largest `|direct − stable| / (1 + 2f)`.
    pub max_form_difference: f64,
}

/// Evaluates `Q` on an `nx × nv` grid over `[0, x_max] × [0, 2]`.
pub fn q_function_scan(nx: usize, nv: usize, x_max: f64) -> QScan {
    let nx = nx.max(2);
    let nv = nv.max(3);
    let dv = 2.0 / (nv - 1) as f64;
    let mut scan = QScan {
        points: nx * nv,
        min: f64::INFINITY,
        max_abs_at_zero: 0.0,
        min_at_two: f64::INFINITY,
        concavity_violations: 0,
        max_form_difference: 0.0,
    };
    let mut row = vec![0.0; nv];
    for i in 0..nx {
        let x = x_max * i as f64 / (nx - 1) as f64;
        let (c, s) = (x.cosh(), x.sinh());
        for (j, q) in row.iter_mut().enumerate() {
            let v = if j + 1 == nv { 2.0 } else { j as f64 * dv };
            *q = q_function(x, v);
            let scale = 1.0 + 2.0 * (2.0 * c * c - s * s * v);
            let diff = (q_function_direct(x, v) - *q).abs() / scale;
            scan.max_form_difference = scan.max_form_difference.max(diff);
            scan.min = scan.min.min(*q);
        }
        scan.max_abs_at_zero = scan.max_abs_at_zero.max(row[0].abs());
        scan.min_at_two = scan.min_at_two.min(row[nv - 1]);
        for j in 1..nv - 1 {
            let d2 = row[j - 1] - 2.0 * row[j] + row[j + 1];
            if d2 > 1e-12 * row[j].abs().max(1.0) {
                scan.concavity_violations += 1;
            }
        }
    }
    scan
}
