//! Continuum weight profiles of small quenches and their widths.
//!
//! `c(ω)` for a field quench of the Ising chain and `c_a(ω)` for an
//! anisotropy quench at `h = 0` are bell-shaped over the band; their width is
//! measured by the first inflection point past the maximum.

use crate::{Error, Result};

const ISING: &str = "ising";
const ANISO: &str = "anisotropy";

/// Band `[|1 − h⁰|, |1 + h⁰|]` of the Ising profile.
pub fn ising_band(h0: f64) -> Result<(f64, f64)> {
    let lo = (1.0 - h0).abs();
    let hi = (1.0 + h0).abs();
    if !(h0.is_finite() && h0 != 0.0 && lo > 0.0) {
        return Err(Error::DegenerateBand {
            curve: ISING,
            value: h0,
        });
    }
    Ok((lo.min(hi), lo.max(hi)))
}

/// Band `[|γ⁰|, 1]` of the anisotropy profile.
pub fn aniso_band(gamma0: f64) -> Result<(f64, f64)> {
    let lo = gamma0.abs();
    if !(lo > 0.0 && lo < 1.0) {
        return Err(Error::DegenerateBand {
            curve: ANISO,
            value: gamma0,
        });
    }
    Ok((lo, 1.0))
}

fn check(curve: &'static str, omega: f64, (lo, hi): (f64, f64)) -> Result<()> {
    if omega >= lo && omega <= hi {
        Ok(())
    } else {
        Err(Error::OutsideBand { curve, omega, lo, hi })
    }
}

/// `c(ω) = (ω² − E_m²)(E_M² − ω²) δh² / (4 (h⁰)² ω⁴)`.
pub fn bell_ising(omega: f64, h0: f64, dh: f64) -> Result<f64> {
    let band = ising_band(h0)?;
    check(ISING, omega, band)?;
    Ok(ising_unchecked(omega, h0, dh))
}

fn ising_unchecked(omega: f64, h0: f64, dh: f64) -> f64 {
    let (em, e_max) = ((1.0 - h0).abs(), (1.0 + h0).abs());
    let w2 = omega * omega;
    (w2 - em * em) * (e_max * e_max - w2) * dh * dh / (4.0 * h0 * h0 * w2 * w2)
}

/// `c_a(ω) = (1 − ω²)(ω² − (γ⁰)²) δγ² / ((1 − (γ⁰)²) ω⁴)`.
pub fn bell_aniso(omega: f64, gamma0: f64, dgamma: f64) -> Result<f64> {
    let band = aniso_band(gamma0)?;
    check(ANISO, omega, band)?;
    Ok(aniso_unchecked(omega, gamma0, dgamma))
}

fn aniso_unchecked(omega: f64, gamma0: f64, dgamma: f64) -> f64 {
    let w2 = omega * omega;
    let g2 = gamma0 * gamma0;
    (1.0 - w2) * (w2 - g2) * dgamma * dgamma / ((1.0 - g2) * w2 * w2)
}

/// Location of the first inflection point past the maximum of a bell `f` on
/// `[lo, hi]`, found from a finite-difference second derivative.
pub fn inflection_width<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> Option<f64> {
    let peak = argmax(&f, lo, hi);
    let span = peak - lo;
    if !(span > 0.0) {
        return None;
    }
    let fd = span * 1e-3;
    let d2 = |x: f64| (f(x + fd) - 2.0 * f(x) + f(x - fd)) / (fd * fd);
    let step = span * 0.01;
    let mut a = peak;
    let mut b = peak + step;
    while b + fd < hi {
        if d2(a) < 0.0 && d2(b) >= 0.0 {
            for _ in 0..100 {
                let m = 0.5 * (a + b);
                if d2(m) < 0.0 {
                    a = m;
                } else {
                    b = m;
                }
            }
            return Some(0.5 * (a + b));
        }
        a = b;
        b += step;
    }
    None
}

/// Golden-section search for the maximum of a unimodal `f`.
fn argmax<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> f64 {
    let g = 0.5 * (libm::sqrt(5.0) - 1.0);
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        }
    }
    0.5 * (a + b)
}

/// Inflection width of the Ising profile; independent of `δh`.
pub fn ising_width(h0: f64) -> Result<f64> {
    let (lo, hi) = ising_band(h0)?;
    inflection_width(|w| ising_unchecked(w, h0, 1.0), lo, hi).ok_or(Error::DegenerateBand {
        curve: ISING,
        value: h0,
    })
}

/// Inflection width of the anisotropy profile; independent of `δγ`.
pub fn aniso_width(gamma0: f64) -> Result<f64> {
    let (lo, hi) = aniso_band(gamma0)?;
    inflection_width(|w| aniso_unchecked(w, gamma0, 1.0), lo, hi).ok_or(Error::DegenerateBand {
        curve: ANISO,
        value: gamma0,
    })
}
