//! Special functions needed by the time averages and the characteristic
//! function: complete elliptic integrals (parameter convention) and `J0`.

use core::f64::consts::{FRAC_1_SQRT_2, FRAC_2_PI, PI};

use libm::{cos, sin, sqrt};

use crate::{Error, Result};

const AGM_TOL: f64 = 1e-15;
const AGM_MAX_ITER: usize = 64;

/// Runs the AGM from `(1, sqrt(1 - m))` and returns `(K(m), E(m))`.
///
/// `E = K · (1 − Σ_n 2^{n−1} c_n²)` with `c_0² = m`.
fn agm_pair(m: f64) -> (f64, f64) {
    let mut a = 1.0;
    let mut b = sqrt(1.0 - m);
    let mut weight = 0.5;
    let mut sum = weight * m;
    for _ in 0..AGM_MAX_ITER {
        let c = 0.5 * (a - b);
        let next_a = 0.5 * (a + b);
        b = sqrt(a * b);
        a = next_a;
        weight *= 2.0;
        sum += weight * c * c;
        if c.abs() <= AGM_TOL * a {
            break;
        }
    }
    let k = PI / (2.0 * a);
    (k, k * (1.0 - sum))
}

/// Complete elliptic integral of the second kind,
/// `E(m) = ∫₀^{π/2} sqrt(1 − m sin²θ) dθ`, for `0 ≤ m < 1`.
pub fn elliptic_e(m: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&m) {
        return Err(Error::EllipticDomain(m));
    }
    Ok(elliptic_e_unchecked(m))
}

pub(crate) fn elliptic_e_unchecked(m: f64) -> f64 {
    if m <= 0.0 {
        PI / 2.0
    } else if m >= 1.0 {
        1.0
    } else {
        agm_pair(m).1
    }
}

/// Complete elliptic integral of the first kind for `0 ≤ m < 1`.
pub fn elliptic_k(m: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&m) {
        return Err(Error::EllipticDomain(m));
    }
    Ok(agm_pair(m).0)
}

/// Below this argument the power series is used; above it, the Hankel
/// asymptotic expansion. Both stay under ~1e-12 absolute error there.
const J0_SWITCH: f64 = 13.0;

/// Bessel function of the first kind of order zero.
pub fn bessel_j0(x: f64) -> f64 {
    let x = x.abs();
    if x <= J0_SWITCH {
        j0_series(x)
    } else {
        j0_asymptotic(x)
    }
}

fn j0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    loop {
        term *= -q / (k * k);
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-3) {
            return sum;
        }
        k += 1.0;
    }
}

fn j0_asymptotic(x: f64) -> f64 {
    // t_j = |a_j(0)| / x^j, a_j(0) = ∏_{i≤j} (2i−1)² / (j! 8^j)
    let mut p = 1.0;
    let mut q = 0.0;
    let mut t = 1.0;
    let mut j = 1;
    loop {
        let odd = (2 * j - 1) as f64;
        let next = t * odd * odd / (j as f64 * 8.0 * x);
        if next >= t || next < 1e-17 {
            break;
        }
        t = next;
        // P = t0 − t2 + t4 − …,  Q = −t1 + t3 − t5 + …
        match j % 4 {
            0 => p += t,
            1 => q -= t,
            2 => p -= t,
            _ => q += t,
        }
        j += 1;
    }
    let (s, c) = (sin(x), cos(x));
    let cos_chi = (c + s) * FRAC_1_SQRT_2;
    let sin_chi = (s - c) * FRAC_1_SQRT_2;
    sqrt(FRAC_2_PI / x) * (p * cos_chi - q * sin_chi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::integrate;

    fn e_quadrature(m: f64) -> f64 {
        integrate(|th| sqrt(1.0 - m * sin(th) * sin(th)), 0.0, PI / 2.0, 1e-15)
    }

    // The integrand is analytic and periodic, so the trapezoid rule
    // converges geometrically once the grid resolves the oscillation.
    fn j0_quadrature(x: f64) -> f64 {
        let n = 64 + 4 * x as usize;
        let h = PI / n as f64;
        (0..n).map(|i| cos(x * sin(i as f64 * h))).sum::<f64>() / n as f64
    }

    #[test]
    fn elliptic_e_endpoints() {
        assert_eq!(elliptic_e(0.0).unwrap(), PI / 2.0);
        assert!(elliptic_e(1.0).is_err());
        assert!((elliptic_e(1.0 - 1e-12).unwrap() - 1.0).abs() < 1e-6);
        assert!(elliptic_e(-0.1).is_err());
        assert!(elliptic_e(1.5).is_err());
        assert!(elliptic_k(1.0).is_err());
    }

    #[test]
    fn elliptic_e_matches_quadrature() {
        for i in 0..=40 {
            let m = 0.999 * i as f64 / 40.0;
            let exact = e_quadrature(m);
            assert!((elliptic_e(m).unwrap() - exact).abs() < 1e-12, "m = {m}");
        }
        assert!((elliptic_e(0.5).unwrap() - e_quadrature(0.5)).abs() < 1e-12);
    }

    #[test]
    fn elliptic_k_matches_quadrature() {
        for &m in &[0.0, 0.1, 0.5, 0.9] {
            let exact = integrate(|th| 1.0 / sqrt(1.0 - m * sin(th) * sin(th)), 0.0, PI / 2.0, 1e-15);
            assert!((elliptic_k(m).unwrap() - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn j0_basic_values() {
        assert_eq!(bessel_j0(0.0), 1.0);
        assert_eq!(bessel_j0(-3.3), bessel_j0(3.3));
        // First zero, bracketed by a sign change.
        let z = 2.404_825_557_695_773;
        assert!(bessel_j0(z - 1e-9) > 0.0 && bessel_j0(z + 1e-9) < 0.0);
    }

    #[test]
    fn j0_matches_quadrature() {
        let mut x = 0.0;
        while x <= 60.0 {
            let exact = j0_quadrature(x);
            assert!((bessel_j0(x) - exact).abs() < 1e-10, "x = {x}");
            x += 0.37;
        }
        for &x in &[10.0, 12.99, 13.01, 13.5, 250.0, 1234.5] {
            assert!((bessel_j0(x) - j0_quadrature(x)).abs() < 1e-10, "x = {x}");
        }
    }

    #[test]
    fn j0_branches_agree_at_switch() {
        for &x in &[12.0, 13.0, 14.0] {
            assert!((j0_series(x) - j0_asymptotic(x)).abs() < 1e-11);
        }
    }
}
