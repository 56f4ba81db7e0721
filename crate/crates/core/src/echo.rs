//! The exact echo `L(t)`, the linearized echo `L_F(t)`, the effective
//! dimension and the sandwich bounds
//! `d_eff·L_F(t) ≤ L(t) ≤ L_F(t) + 1 − 1/d_eff`.
//!
//! Every factor is written in terms of `s = 1/cosh(βΛ⁰)`, so the
//! zero-temperature and overflow regimes need no special casing here.

use alloc::vec::Vec;

use libm::{exp, expm1, log, log1p, sin, sqrt};

use crate::model::{ModeEntry, ModeTable};

/// Above this length products are accumulated as sums of logarithms.
pub const LOG_SPACE_LENGTH: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EchoPoint {
    pub t: f64,
    pub le: f64,
    pub lef: f64,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EffectiveDimension {
    pub d_eff: f64,
    /// `Tr ρ² = 1/d_eff`.
    pub purity: f64,
    pub ln_d_eff: f64,
}

/// `sin²(Λ¹t)·α`, the time-dependent mixing of one mode.
#[inline]
fn mixing(m: &ModeEntry, t: f64) -> f64 {
    let st = sin(m.post.lambda * t);
    m.alpha * st * st
}

/// `u = sqrt(1 − (1−s²)q)`, clamped to `[s, 1]`.
#[inline]
fn root(m: &ModeEntry, q: f64) -> f64 {
    let u = sqrt(1.0 - m.one_minus_inv_c2 * q);
    u.clamp(m.inv_c, 1.0)
}

/// `ln` of the exact per-mode factor `((s+u)/(1+s))²`.
#[inline]
fn ln_mode_factor(m: &ModeEntry, t: f64) -> f64 {
    let q = mixing(m, t);
    let u = root(m, q);
    2.0 * log1p(-m.one_minus_inv_c * q / (1.0 + u))
}

#[inline]
fn mode_factor(m: &ModeEntry, t: f64) -> f64 {
    let q = mixing(m, t);
    let u = root(m, q);
    let r = (m.inv_c + u) / (1.0 + m.inv_c);
    r * r
}

/// `1 − (1−s²)q`, the linearized per-mode factor without the purity.
#[inline]
fn lin_factor(m: &ModeEntry, t: f64) -> f64 {
    1.0 - m.one_minus_inv_c2 * mixing(m, t)
}

/// `1/(1+s)²`, the per-mode purity.
#[inline]
fn purity_factor(m: &ModeEntry) -> f64 {
    let r = 1.0 / (1.0 + m.inv_c);
    r * r
}

fn reduce<F>(table: &ModeTable, factor: F) -> f64
where
    F: Fn(&ModeEntry) -> f64,
{
    if table.params().length > LOG_SPACE_LENGTH {
        exp(table.iter().map(|m| log(factor(m))).sum::<f64>())
    } else {
        table.iter().map(factor).product()
    }
}

/// Exact echo `L(t) = ∏_k ((1 + sqrt(c² − (c²−1)α sin²(Λ¹t))) / (1+c))²`.
pub fn loschmidt(table: &ModeTable, t: f64) -> f64 {
    if table.params().length > LOG_SPACE_LENGTH {
        exp(ln_loschmidt(table, t))
    } else {
        table.iter().map(|m| mode_factor(m, t)).product()
    }
}

/// `ln L(t)`, accurate even where `L(t)` underflows.
pub fn ln_loschmidt(table: &ModeTable, t: f64) -> f64 {
    table.iter().map(|m| ln_mode_factor(m, t)).sum()
}

/// `1 − L(t)` without cancellation at short times.
pub fn one_minus_loschmidt(table: &ModeTable, t: f64) -> f64 {
    -expm1(ln_loschmidt(table, t))
}

pub fn effective_dimension(table: &ModeTable) -> EffectiveDimension {
    let ln_d_eff = 2.0 * table.iter().map(|m| log1p(m.inv_c)).sum::<f64>();
    EffectiveDimension {
        d_eff: exp(ln_d_eff),
        purity: reduce(table, purity_factor),
        ln_d_eff,
    }
}

/// Linearized echo `L_F(t) = Tr[ρ(t)ρ]`.
pub fn linearized(table: &ModeTable, t: f64) -> f64 {
    reduce(table, |m| purity_factor(m) * lin_factor(m, t))
}

/// `(d_eff·L_F(t), L_F(t) + 1 − 1/d_eff)`.
pub fn bounds(table: &ModeTable, t: f64) -> (f64, f64) {
    let lower = reduce(table, |m| lin_factor(m, t));
    let purity = effective_dimension(table).purity;
    (lower, linearized(table, t) + (1.0 - purity))
}

pub fn echo_point(table: &ModeTable, t: f64) -> EchoPoint {
    let (lower, upper) = bounds(table, t);
    EchoPoint {
        t,
        le: loschmidt(table, t),
        lef: linearized(table, t),
        lower,
        upper,
    }
}

pub fn time_series(table: &ModeTable, times: &[f64]) -> Vec<EchoPoint> {
    times.iter().map(|&t| echo_point(table, t)).collect()
}

/// Coefficient `A` of the short-time law `1 − L(t) = A t² + O(t⁴)`:
/// `A = Σ_k (1 − 1/c_k) α_k (Λ_k¹)²`.
pub fn short_time_coefficient(table: &ModeTable) -> f64 {
    table
        .iter()
        .map(|m| m.one_minus_inv_c * m.alpha * m.post.lambda * m.post.lambda)
        .sum()
}

/// Least-squares fit of `1 − L(t) = A t² + B t⁴`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ShortTimeFit {
    pub a: f64,
    pub b: f64,
    pub r_squared: f64,
}

/// Fits the decay on `n` equally spaced times in `(0, t_max]`.
///
/// Returns `None` when fewer than two points are requested or the decay is
/// identically zero.
pub fn fit_short_time(table: &ModeTable, t_max: f64, n: usize) -> Option<ShortTimeFit> {
    if n < 2 || !(t_max > 0.0) {
        return None;
    }
    let pts: Vec<(f64, f64)> = (1..=n)
        .map(|i| {
            let t = t_max * i as f64 / n as f64;
            (t * t, one_minus_loschmidt(table, t))
        })
        .collect();
    // Normal equations for the basis (x, x²) with x = t².
    let (mut s22, mut s23, mut s24, mut sy2, mut sy4) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(x, y) in &pts {
        s22 += x * x;
        s23 += x * x * x;
        s24 += x * x * x * x;
        sy2 += x * y;
        sy4 += x * x * y;
    }
    let det = s22 * s24 - s23 * s23;
    if det == 0.0 {
        return None;
    }
    let a = (sy2 * s24 - sy4 * s23) / det;
    let b = (s22 * sy4 - s23 * sy2) / det;
    let mean = pts.iter().map(|p| p.1).sum::<f64>() / n as f64;
    let (mut ss_res, mut ss_tot) = (0.0, 0.0);
    for &(x, y) in &pts {
        let r = y - (a * x + b * x * x);
        ss_res += r * r;
        ss_tot += (y - mean) * (y - mean);
    }
    if ss_tot == 0.0 {
        return None;
    }
    Some(ShortTimeFit {
        a,
        b,
        r_squared: 1.0 - ss_res / ss_tot,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{mode_table, QuenchParams, Temperature};
    use crate::testing::{random_params, TestRng};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn fig1() -> ModeTable {
        mode_table(&QuenchParams::new(0.5, 0.5, 0.25, 0.1, 10.0, 80).unwrap()).unwrap()
    }

    /// The echo written with `c = cosh(βΛ⁰)` exactly as the product formula
    /// reads, evaluated with std floats; only usable where `c` is moderate.
    fn textbook_le(p: &QuenchParams, t: f64) -> f64 {
        let beta = p.beta();
        crate::model::momenta(p.length)
            .unwrap()
            .into_iter()
            .map(|k| {
                let (e0, d0) = (k.cos() + p.h0, p.gamma0 * k.sin());
                let (e1, d1) = (k.cos() + p.h1, p.gamma1 * k.sin());
                let (l0, l1) = (e0.hypot(d0), e1.hypot(d1));
                let sin_dt = (e0 * d1 - d0 * e1) / (l0 * l1);
                let alpha = sin_dt * sin_dt;
                let c = (beta * l0).cosh();
                let st = (l1 * t).sin();
                let r = (1.0 + (c * c - (c * c - 1.0) * alpha * st * st).sqrt()) / (1.0 + c);
                r * r
            })
            .product()
    }

    fn textbook_lf(p: &QuenchParams, t: f64) -> f64 {
        let beta = p.beta();
        crate::model::momenta(p.length)
            .unwrap()
            .into_iter()
            .map(|k| {
                let (e0, d0) = (k.cos() + p.h0, p.gamma0 * k.sin());
                let (e1, d1) = (k.cos() + p.h1, p.gamma1 * k.sin());
                let (l0, l1) = (e0.hypot(d0), e1.hypot(d1));
                let sin_dt = (e0 * d1 - d0 * e1) / (l0 * l1);
                let c = (beta * l0).cosh();
                let st = (l1 * t).sin();
                let pur = (c / (c + 1.0)).powi(2);
                pur * (1.0 - (1.0 - 1.0 / (c * c)) * sin_dt * sin_dt * st * st)
            })
            .product()
    }

    #[test]
    fn matches_textbook_formula() {
        let mut rng = TestRng::new(11);
        for _ in 0..300 {
            let mut p = random_params(&mut rng, 40);
            if p.temperature == Temperature::Zero {
                p.temperature = Temperature::Beta(3.0);
            }
            let table = mode_table(&p).unwrap();
            let t = rng.uniform(-20.0, 20.0);
            assert_relative_eq!(loschmidt(&table, t), textbook_le(&p, t), max_relative = 1e-11);
            assert_relative_eq!(linearized(&table, t), textbook_lf(&p, t), max_relative = 1e-11);
        }
    }

    #[test]
    fn initial_values() {
        let table = fig1();
        let d = effective_dimension(&table);
        assert_eq!(loschmidt(&table, 0.0), 1.0);
        assert_relative_eq!(linearized(&table, 0.0), d.purity, max_relative = 1e-12);
        let (lo, hi) = bounds(&table, 0.0);
        assert!((lo - 1.0).abs() < 1e-12 && (hi - 1.0).abs() < 1e-12);
    }

    #[test]
    fn isotropic_chain_has_no_dynamics() {
        let table = mode_table(&QuenchParams::new(0.3, 1.4, 0.0, 0.0, 0.7, 12).unwrap()).unwrap();
        let d = effective_dimension(&table);
        for i in 0..50 {
            let t = 0.37 * i as f64;
            assert_eq!(loschmidt(&table, t), 1.0);
            assert_relative_eq!(linearized(&table, t), d.purity, max_relative = 1e-14);
        }
    }

    #[test]
    fn effective_dimension_limits() {
        let p = QuenchParams::zero_temperature(0.5, 0.7, 0.25, 0.1, 20).unwrap();
        let d = effective_dimension(&mode_table(&p).unwrap());
        assert_eq!(d.d_eff, 1.0);
        assert_eq!(d.purity, 1.0);

        for &len in &[4usize, 20, 100] {
            let p = QuenchParams::new(0.5, 0.7, 0.25, 0.1, 1e-8, len).unwrap();
            let d = effective_dimension(&mode_table(&p).unwrap());
            assert_relative_eq!(d.d_eff, libm::pow(2.0, len as f64), max_relative = 1e-6);
            assert_relative_eq!(d.d_eff * d.purity, 1.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn log_space_agrees_with_direct_product() {
        let mut rng = TestRng::new(5);
        for _ in 0..100 {
            let p = random_params(&mut rng, LOG_SPACE_LENGTH);
            let table = mode_table(&p).unwrap();
            let t = rng.uniform(0.0, 30.0);
            assert_relative_eq!(
                loschmidt(&table, t),
                exp(ln_loschmidt(&table, t)),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn large_chains_do_not_underflow() {
        let p = QuenchParams::new(0.5, 1.5, 1.0, 0.3, 1.0, 4000).unwrap();
        let table = mode_table(&p).unwrap();
        let z = ln_loschmidt(&table, 3.3);
        assert!(z.is_finite() && z < -10.0, "{z}");
        assert_eq!(loschmidt(&table, 3.3), exp(z));
        let d = effective_dimension(&table);
        assert!(d.ln_d_eff > 1000.0 && d.purity == 0.0, "{d:?}");
    }

    #[test]
    fn fig1_bounds_on_grid() {
        let table = fig1();
        for i in 0..1000 {
            let pt = echo_point(&table, 50.0 * i as f64 / 999.0);
            assert!(pt.le - pt.lower >= -1e-12, "{pt:?}");
            assert!(pt.upper - pt.le >= -1e-12, "{pt:?}");
            assert!(pt.lef <= pt.le + 1e-12);
        }
    }

    #[test]
    fn short_time_law() {
        let table = fig1();
        let fit = fit_short_time(&table, 0.01, 50).unwrap();
        assert!(fit.r_squared > 0.999);
        assert_relative_eq!(fit.a, short_time_coefficient(&table), max_relative = 1e-6);
    }

    #[test]
    fn short_time_coefficient_is_extensive() {
        let at = |len| {
            let p = QuenchParams::new(0.5, 0.8, 0.7, 0.4, 2.0, len).unwrap();
            fit_short_time(&mode_table(&p).unwrap(), 0.01, 50).unwrap().a
        };
        let ratio = at(200) / at(100);
        assert!((ratio - 2.0).abs() < 0.2, "{ratio}");
    }

    #[test]
    fn fit_rejects_degenerate_input() {
        let table = mode_table(&QuenchParams::new(0.3, 0.3, 0.5, 0.5, 1.0, 8).unwrap()).unwrap();
        assert!(fit_short_time(&table, 0.01, 20).is_none());
        assert!(fit_short_time(&fig1(), 0.01, 1).is_none());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]

        #[test]
        fn sandwich_holds(seed in any::<u64>(), t in -100.0f64..100.0) {
            let p = random_params(&mut TestRng::new(seed), 200);
            let table = mode_table(&p).unwrap();
            let pt = echo_point(&table, t);
            prop_assert!(pt.le > 0.0 || p.length > LOG_SPACE_LENGTH);
            prop_assert!(pt.le <= 1.0);
            prop_assert!(pt.le - pt.lower >= -1e-12);
            prop_assert!(pt.upper - pt.le >= -1e-12);
            prop_assert!(pt.lef <= pt.le + 1e-12);
        }

        #[test]
        fn echo_is_even_in_time(seed in any::<u64>(), t in 0.0f64..50.0) {
            let table = mode_table(&random_params(&mut TestRng::new(seed), 60)).unwrap();
            prop_assert_eq!(ln_loschmidt(&table, t), ln_loschmidt(&table, -t));
        }

        #[test]
        fn heating_never_lowers_the_echo(seed in any::<u64>(), t in 0.0f64..50.0) {
            let mut rng = TestRng::new(seed);
            let p = random_params(&mut rng, 60);
            let mut prev = f64::NEG_INFINITY;
            for i in 0..12 {
                let beta = 20.0 * libm::pow(0.5, i as f64);
                let table = mode_table(&p.with_temperature(Temperature::Beta(beta)).unwrap()).unwrap();
                let z = ln_loschmidt(&table, t);
                prop_assert!(z >= prev - 1e-12, "beta {beta}: {z} < {prev}");
                prev = z;
            }
        }
    }
}
