//! Verification suites: the closed forms of `thermecho-core` against the dense
//! oracle, the sandwich bounds on random quenches, the auxiliary
//! inequalities and the perturbative expansion.
//!
//! Seeds and tolerances default to `fixtures/oracle.json`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::ThreadPool;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thermecho_core::averages::avg_linearized;
use thermecho_core::echo::{bounds, effective_dimension, linearized, loschmidt};
use thermecho_core::model::mode_table;
use thermecho_core::{QuenchParams, Temperature};

use crate::error::CliResult;
use crate::oracle::{
    build_quasifree, bures_decomposition, fidelity_weights, gibbs, q_function_scan,
    qubit_inequality_check, random_hermitian, uhlmann, DenseOperator, DenseQuench, Perturbation,
};
use crate::parallel::par_map;

pub const FIXTURE: &str = include_str!("../fixtures/oracle.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub oracle: f64,
    pub bound_slack: f64,
    pub q_min: f64,
    pub q_zero: f64,
    pub qubit_closed_form: f64,
    /// Allowed relative deviation of the error ratio from 8 per halving.
    pub cubic_ratio: f64,
    pub bures: f64,
}

/// Suite settings. A config file may give any subset of the fields; the
/// rest come from the fixture (see [`VerifyConfig::merged`]).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Chain lengths for the dense comparison.
    pub sizes: Vec<usize>,
    pub param_sets: usize,
    pub times: usize,
    pub bound_samples: usize,
    pub bound_max_length: usize,
    pub qubit_trials: usize,
    /// Points per axis of the `Q(x, v)` grid.
    pub q_grid: usize,
    pub q_x_max: f64,
    pub perturbation_dim: usize,
    pub perturbation_beta: f64,
    pub perturbation_seeds: Vec<u64>,
    pub perturbation_scale: f64,
    pub halvings: usize,
    pub bures_scale: f64,
    /// Corrupts the product formula so that the oracle suite must fail.
    pub inject_fault: bool,
    pub tolerances: Tolerances,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        serde_json::from_str(FIXTURE).expect("fixture parses")
    }
}

impl VerifyConfig {
    /// Overlays the given fields (nested objects key by key) on the fixture.
    pub fn merged(overrides: Value) -> Result<Self, serde_json::Error> {
        fn overlay(base: &mut Value, top: Value) {
            match (base, top) {
                (Value::Object(b), Value::Object(t)) => {
                    for (k, v) in t {
                        match b.get_mut(&k) {
                            Some(slot) => overlay(slot, v),
                            None => {
                                b.insert(k, v);
                            }
                        }
                    }
                }
                (slot, v) => *slot = v,
            }
        }
        let mut base: Value = serde_json::from_str(FIXTURE).expect("fixture parses");
        overlay(&mut base, overrides);
        serde_json::from_value(base)
    }

    pub(crate) fn deserialize_merged<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        Self::merged(v).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Suite {
    pub name: &'static str,
    pub passed: bool,
    pub metrics: BTreeMap<&'static str, Value>,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Suite {
            name,
            passed: true,
            metrics: BTreeMap::new(),
        }
    }

    fn metric(&mut self, key: &'static str, value: impl Serialize) {
        self.metrics.insert(key, json!(value));
    }

    /// Records `value` and fails the suite unless `ok`.
    fn check(&mut self, key: &'static str, value: impl Serialize, ok: bool) {
        self.metric(key, value);
        self.passed &= ok;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub suites: Vec<Suite>,
}

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

/// Random quench with fields and anisotropies in `[−1.5, 1.5]` and `β`
/// log-uniform in `[beta_lo, beta_hi]`.
pub fn random_quench(rng: &mut ChaCha8Rng, length: usize, beta_lo: f64, beta_hi: f64) -> QuenchParams {
    let mut r = || uniform(rng, -1.5, 1.5);
    let (h0, h1, g0, g1) = (r(), r(), r(), r());
    let beta = (uniform(rng, beta_lo.ln(), beta_hi.ln())).exp();
    QuenchParams::new(h0, h1, g0, g1, beta, length).expect("valid random quench")
}

struct OracleCase {
    params: QuenchParams,
    times: Vec<f64>,
}

#[derive(Default, Clone, Copy)]
struct OracleErrors {
    le: f64,
    lef: f64,
    d_eff: f64,
    purity_bar: f64,
}

fn oracle_case(case: &OracleCase, fault: bool) -> CliResult<OracleErrors> {
    let p = &case.params;
    let h0 = build_quasifree(p.h0, p.gamma0, p.length)?;
    let h1 = build_quasifree(p.h1, p.gamma1, p.length)?;
    let q = DenseQuench::new(&h0, &h1, p.beta())?;
    let table = mode_table(p)?;
    let bump = if fault { 1.0 + 1e-6 } else { 1.0 };
    let mut e = OracleErrors {
        d_eff: (effective_dimension(&table).d_eff * q.purity() - 1.0).abs(),
        purity_bar: (avg_linearized(&table) - q.dephased_purity()).abs(),
        ..OracleErrors::default()
    };
    for &t in &case.times {
        e.le = e.le.max((loschmidt(&table, t) * bump - q.loschmidt(t)).abs());
        e.lef = e.lef.max((linearized(&table, t) - q.linearized(t)).abs());
    }
    Ok(e)
}

/// Product formulas against the dense Fock-space computation.
pub fn oracle_equivalence(cfg: &VerifyConfig, pool: &ThreadPool) -> CliResult<Suite> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut cases = Vec::new();
    for &length in &cfg.sizes {
        for _ in 0..cfg.param_sets {
            let params = random_quench(&mut rng, length, 0.05, 5.0);
            let times = (0..cfg.times).map(|_| uniform(&mut rng, 0.0, 30.0)).collect();
            cases.push(OracleCase { params, times });
        }
    }
    let results = par_map(pool, &cases, |c| oracle_case(c, cfg.inject_fault));
    let mut worst = OracleErrors::default();
    for r in results {
        let r = r?;
        worst.le = worst.le.max(r.le);
        worst.lef = worst.lef.max(r.lef);
        worst.d_eff = worst.d_eff.max(r.d_eff);
        worst.purity_bar = worst.purity_bar.max(r.purity_bar);
    }
    let tol = cfg.tolerances.oracle;
    let mut s = Suite::new("oracle_equivalence");
    s.metric("cases", cases.len());
    s.metric("times_per_case", cfg.times);
    s.check("max_le_error", worst.le, worst.le < tol);
    s.check("max_lef_error", worst.lef, worst.lef < tol);
    s.check("max_d_eff_relative_error", worst.d_eff, worst.d_eff < tol);
    s.check("max_purity_bar_error", worst.purity_bar, worst.purity_bar < tol);
    Ok(s)
}

#[derive(Clone, Copy)]
struct BoundSlack {
    lower: f64,
    upper: f64,
    at_zero: f64,
}

/// `d_eff L_F ≤ L ≤ L_F + 1 − 1/d_eff` on random quenches and times.
pub fn bound_sweep(cfg: &VerifyConfig, pool: &ThreadPool) -> CliResult<Suite> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xb0b0);
    let half = (cfg.bound_max_length / 2).max(1);
    let cases: Vec<(QuenchParams, f64)> = (0..cfg.bound_samples)
        .map(|_| {
            let length = 2 * rng.random_range(1..=half);
            let mut p = random_quench(&mut rng, length, 1e-2, 1e2);
            if rng.random::<f64>() < 0.05 {
                p = p.with_temperature(Temperature::Zero).expect("valid");
            }
            (p, uniform(&mut rng, 0.0, 100.0))
        })
        .collect();
    let slacks = par_map(pool, &cases, |(p, t)| -> CliResult<BoundSlack> {
        let table = mode_table(p)?;
        let le = loschmidt(&table, *t);
        let (lo, hi) = bounds(&table, *t);
        let (lo0, hi0) = bounds(&table, 0.0);
        Ok(BoundSlack {
            lower: le - lo,
            upper: hi - le,
            at_zero: (lo0 - 1.0).abs().max((hi0 - 1.0).abs()),
        })
    });
    let mut worst = BoundSlack {
        lower: f64::INFINITY,
        upper: f64::INFINITY,
        at_zero: 0.0,
    };
    for s in slacks {
        let s = s?;
        worst.lower = worst.lower.min(s.lower);
        worst.upper = worst.upper.min(s.upper);
        worst.at_zero = worst.at_zero.max(s.at_zero);
    }
    let tol = cfg.tolerances.bound_slack;
    let mut s = Suite::new("bound_sweep");
    s.metric("samples", cases.len());
    s.check("worst_lower_slack", worst.lower, worst.lower >= -tol);
    s.check("worst_upper_slack", worst.upper, worst.upper >= -tol);
    s.check("max_error_at_t0", worst.at_zero, worst.at_zero <= tol);
    Ok(s)
}

/// The single-qubit inequality on random states and unitaries.
pub fn qubit_suite(cfg: &VerifyConfig) -> CliResult<Suite> {
    let r = qubit_inequality_check(cfg.qubit_trials, cfg.seed ^ 0x9b17)?;
    let mut s = Suite::new("qubit_inequality");
    s.metric("trials", r.trials);
    s.check("violations", r.violations, r.violations == 0);
    s.check("worst_slack", r.worst_slack, r.worst_slack >= -cfg.tolerances.bound_slack);
    s.check(
        "max_closed_form_error",
        r.max_closed_form_error,
        r.max_closed_form_error <= cfg.tolerances.qubit_closed_form,
    );
    Ok(s)
}

/// Grid scan of `Q(x, v)`.
pub fn q_suite(cfg: &VerifyConfig) -> Suite {
    let q = q_function_scan(cfg.q_grid, cfg.q_grid, cfg.q_x_max);
    let tol = &cfg.tolerances;
    let mut s = Suite::new("q_function_scan");
    s.metric("points", q.points);
    s.metric("x_max", cfg.q_x_max);
    s.check("min", q.min, q.min >= -tol.q_min);
    s.check("max_abs_at_v0", q.max_abs_at_zero, q.max_abs_at_zero <= tol.q_zero);
    s.check("min_at_v2", q.min_at_two, q.min_at_two >= -tol.q_min);
    s.check("concavity_violations", q.concavity_violations, q.concavity_violations == 0);
    s.metric("max_form_difference", q.max_form_difference);
    s
}

fn instance(cfg: &VerifyConfig, seed: u64) -> (DenseOperator, DenseOperator) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h0 = random_hermitian(cfg.perturbation_dim, 1.0, &mut rng);
    let v = random_hermitian(cfg.perturbation_dim, 1.0, &mut rng);
    (h0, v)
}

fn scaled(v: &DenseOperator, s: f64) -> DenseOperator {
    DenseOperator::new(v.matrix().map(|z| z * s))
}

/// Times at which the perturbative echo is compared with the exact one.
fn comparison_times() -> Vec<f64> {
    (1..=20).map(|k| 0.5 * k as f64).collect()
}

/// Largest `|exact − perturbative|` over the comparison times.
pub fn perturbative_error(h0: &DenseOperator, v: &DenseOperator, beta: f64) -> CliResult<f64> {
    let exact = DenseQuench::new(h0, &(h0 + v), beta)?;
    let pert = Perturbation::new(h0, v, beta)?;
    Ok(comparison_times()
        .iter()
        .map(|&t| (exact.loschmidt(t) - pert.le(t)).abs())
        .fold(0.0, f64::max))
}

/// Error ratios under repeated halving of the coupling, per instance.
pub fn perturbation_ratios(cfg: &VerifyConfig) -> CliResult<Vec<Vec<f64>>> {
    cfg.perturbation_seeds
        .iter()
        .map(|&seed| {
            let (h0, v) = instance(cfg, seed);
            let errors = (0..=cfg.halvings)
                .map(|j| {
                    let s = cfg.perturbation_scale / (1u64 << j) as f64;
                    perturbative_error(&h0, &scaled(&v, s), cfg.perturbation_beta)
                })
                .collect::<CliResult<Vec<f64>>>()?;
            Ok(errors.windows(2).map(|w| w[0] / w[1]).collect())
        })
        .collect()
}

pub fn perturbation_suite(cfg: &VerifyConfig) -> CliResult<Suite> {
    let ratios = perturbation_ratios(cfg)?;
    let worst = ratios
        .iter()
        .flatten()
        .map(|r| (r / 8.0 - 1.0).abs())
        .fold(0.0, f64::max);
    let mut s = Suite::new("perturbation_scaling");
    s.metric("error_ratios", &ratios);
    s.check("worst_ratio_deviation", worst, worst <= cfg.tolerances.cubic_ratio && !ratios.is_empty());
    Ok(s)
}

/// `F(ρ₀, ρ₁)² = L̄ − ds²_FR/2` and the thermal damping factors.
pub fn bures_suite(cfg: &VerifyConfig) -> CliResult<Suite> {
    let beta = cfg.perturbation_beta;
    let mut residual: f64 = 0.0;
    let mut damping_range = (f64::INFINITY, f64::NEG_INFINITY);
    let mut cold_defect: f64 = 0.0;
    let mut nonclassical_min = f64::INFINITY;
    for &seed in &cfg.perturbation_seeds {
        let (h0, v) = instance(cfg, seed);
        let v = scaled(&v, cfg.bures_scale);
        let rho0 = gibbs(&h0, beta)?;
        let rho1 = gibbs(&(&h0 + &v), beta)?;
        let f = uhlmann(rho0.matrix(), rho1.matrix())?;
        let b = bures_decomposition(&h0, &v, beta)?;
        let lbar = Perturbation::new(&h0, &v, beta)?.lbar();
        residual = residual.max((f * f - (lbar - b.ds2_fr / 2.0)).abs());
        nonclassical_min = nonclassical_min.min(b.nonclassical);

        let warm = fidelity_weights(&h0, &v, beta)?;
        for &d in &warm.damping {
            damping_range = (damping_range.0.min(d), damping_range.1.max(d));
        }
        let cold = fidelity_weights(&h0, &v, 1e4)?;
        for &d in &cold.damping[1..] {
            cold_defect = cold_defect.max((d - 1.0).abs());
        }
    }
    let mut s = Suite::new("bures_relation");
    s.metric("scale", cfg.bures_scale);
    s.check("max_relation_residual", residual, residual < cfg.tolerances.bures);
    s.check("min_nonclassical", nonclassical_min, nonclassical_min >= 0.0);
    s.check(
        "damping_range",
        [damping_range.0, damping_range.1],
        damping_range.0 >= 0.0 && damping_range.1 <= 1.0,
    );
    s.check("cold_damping_defect", cold_defect, cold_defect < 1e-12);
    Ok(s)
}

pub fn run(cfg: &VerifyConfig, pool: &ThreadPool) -> CliResult<VerifyReport> {
    let suites = vec![
        oracle_equivalence(cfg, pool)?,
        bound_sweep(cfg, pool)?,
        qubit_suite(cfg)?,
        q_suite(cfg),
        perturbation_suite(cfg)?,
        bures_suite(cfg)?,
    ];
    Ok(VerifyReport {
        passed: suites.iter().all(|s| s.passed),
        suites,
    })
}
