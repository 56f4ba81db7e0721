//! End-to-end acceptance checks. Runs without the libtest harness so that
//! every criterion prints exactly one PASS/FAIL line.

use std::f64::consts::PI;
use std::io::Write;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use thermecho::commands::sample;
use thermecho::parallel::{pool, threads_from_env};
use thermecho::verify::{self, Suite, VerifyConfig};
use thermecho_core::averages::{avg_loschmidt, smallquench_variance, variance_le};
use thermecho_core::echo::{fit_short_time, short_time_coefficient};
use thermecho_core::model::mode_table;
use thermecho_core::special::{bessel_j0, elliptic_e};
use thermecho_core::stats::{
    aniso_width, classify, default_tau, ising_width, max_char_fn_deviation, weights,
    ClassifierConfig, Label, SampleSet,
};
use thermecho_core::{ModeTable, QuenchParams};

const SAMPLES: usize = 100_000;
const SEED: u64 = 0x5eed_1e55_ca5c_ade5;

type Outcome = Result<(bool, String), String>;
type Criterion = (&'static str, fn(&Ctx) -> Outcome);

struct Ctx {
    pool: rayon::ThreadPool,
    fixture: VerifyConfig,
}

impl Ctx {
    fn samples(&self, table: &ModeTable) -> SampleSet {
        let tau = default_tau(table.params().length, 100.0);
        sample(table, tau, SAMPLES, SEED, &self.pool).expect("sampling")
    }
}

fn table(h0: f64, h1: f64, g0: f64, g1: f64, beta: f64, length: usize) -> ModeTable {
    mode_table(&QuenchParams::new(h0, h1, g0, g1, beta, length).unwrap()).unwrap()
}

fn reference(length: usize) -> ModeTable {
    table(0.5, 0.5, 0.25, 0.1, 10.0, length)
}

fn suite_line(s: &Suite) -> String {
    let m: Vec<String> = s.metrics.iter().map(|(k, v)| format!("{k}={v}")).collect();
    m.join(" ")
}

fn suites(list: &[Suite]) -> Outcome {
    let ok = list.iter().all(|s| s.passed);
    Ok((ok, list.iter().map(suite_line).collect::<Vec<_>>().join(" | ")))
}

fn within(x: f64, target: f64, rel: f64) -> bool {
    (x / target - 1.0).abs() <= rel
}

fn oracle_equivalence(c: &Ctx) -> Outcome {
    let start = Instant::now();
    let s = verify::oracle_equivalence(&c.fixture, &c.pool).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let fast = elapsed < Duration::from_secs(120);
    Ok((s.passed && fast, format!("{} runtime={elapsed:.1?}", suite_line(&s))))
}

fn bound_suite(c: &Ctx) -> Outcome {
    suites(&[verify::bound_sweep(&c.fixture, &c.pool).map_err(|e| e.to_string())?])
}

fn decay_and_mean(c: &Ctx) -> Outcome {
    let start = Instant::now();
    let t = reference(80);
    let fit = fit_short_time(&t, 0.01, 50).ok_or("no short-time fit")?;
    let a_exact = short_time_coefficient(&t);
    let set = c.samples(&t);
    let m = set.le_moments();
    let lbar = avg_loschmidt(&t);
    let z = (m.mean - lbar) / m.std_error;
    let elapsed = start.elapsed();
    let ok = fit.r_squared > 0.999 && z.abs() < 3.0 && elapsed < Duration::from_secs(60);
    Ok((
        ok,
        format!(
            "A_fit={:.6e} A_exact={a_exact:.6e} R2={:.12} mean={:.8} lbar={lbar:.8} se={:.2e} z={z:.2} runtime={elapsed:.1?}",
            fit.a, fit.r_squared, m.mean, m.std_error
        ),
    ))
}

fn extensivity(_: &Ctx) -> Outcome {
    let a = |l| fit_short_time(&reference(l), 0.01, 50).map(|f| f.a).ok_or("no fit");
    let (a100, a200) = (a(100)?, a(200)?);
    let ratio = a200 / a100;
    Ok((within(ratio, 2.0, 0.1), format!("A(100)={a100:.6e} A(200)={a200:.6e} ratio={ratio:.6}")))
}

fn classify_at(c: &Ctx, t: &ModeTable) -> Result<thermecho_core::stats::Classification, String> {
    let set = c.samples(t);
    classify(&weights(t, false), &set.z_values, &ClassifierConfig::default()).map_err(|e| e.to_string())
}

fn describe(c: &thermecho_core::stats::Classification) -> String {
    format!(
        "{}(weights {}, r={:.3}, a1={:.4e}, a2={:.4e}, peaks={:?})",
        c.label, c.weight_label, c.dominance, c.a1, c.a2, c.histogram_peaks
    )
}

fn temperature_crossover(c: &Ctx) -> Outcome {
    let start = Instant::now();
    let at = |temperature: f64| {
        let p = QuenchParams::new(0.99, 1.01, 1.0, 1.0, 1.0 / temperature, 50).unwrap();
        classify_at(c, &mode_table(&p).unwrap())
    };
    let cold = at(0.02)?;
    let warm = at(0.18)?;
    let predicted = 2.0 * (cold.a1 - cold.a2).abs();
    let separation = match cold.histogram_peaks.as_deref() {
        Some([lo, hi]) => (hi - lo).abs(),
        _ => f64::NAN,
    };
    let elapsed = start.elapsed();
    let ok = cold.label == Label::DoublePeaked
        && warm.label == Label::Gaussian
        && within(separation, predicted, 0.15)
        && elapsed < Duration::from_secs(120);
    Ok((
        ok,
        format!(
            "T=0.02 {} T=0.18 {} separation={separation:.4e} predicted={predicted:.4e} runtime={elapsed:.1?}",
            describe(&cold),
            describe(&warm)
        ),
    ))
}

fn merged_and_split(c: &Ctx) -> Outcome {
    let merged = classify_at(c, &table(0.2, 0.2, 0.01, -0.01, 40.0, 78))?;
    let split = classify_at(c, &table(0.2, 0.2, 0.01, -0.01, 40.0, 70))?;
    let pair = merged.a2 / merged.a1;
    let ok = merged.label == Label::MergedSinglePeak && pair >= 0.95 && split.label == Label::DoublePeaked;
    Ok((ok, format!("L=78 {} a2/a1={pair:.4} L=70 {}", describe(&merged), describe(&split))))
}

fn max_dtheta(t: &ModeTable) -> f64 {
    t.iter().map(|m| m.dtheta.abs()).fold(0.0, f64::max)
}

fn characteristic_function(c: &Ctx) -> Outcome {
    let t = table(0.5, 0.51, 0.3, 0.3, 10.0, 40);
    let dmax = max_dtheta(&t);
    let w = weights(&t, false);
    let set = c.samples(&t);
    let grid: Vec<f64> = (0..=500).map(|i| 0.1 * i as f64).collect();
    let sup = max_char_fn_deviation(&w, &set.z_values, &grid);
    let var = set.z_moments().variance;
    let kappa2 = w.kappa2();
    let ok = dmax < 0.05 && sup < 0.05 && within(var, kappa2, 0.05);
    Ok((ok, format!("max|dtheta|={dmax:.4} sup={sup:.3e} kappa2={kappa2:.6e} var={var:.6e}")))
}

fn appendix(c: &Ctx) -> Outcome {
    suites(&[verify::q_suite(&c.fixture), verify::qubit_suite(&c.fixture).map_err(|e| e.to_string())?])
}

fn perturbation(c: &Ctx) -> Outcome {
    suites(&[
        verify::perturbation_suite(&c.fixture).map_err(|e| e.to_string())?,
        verify::bures_suite(&c.fixture).map_err(|e| e.to_string())?,
    ])
}

fn variance(c: &Ctx) -> Outcome {
    let t = reference(80);
    let analytic = variance_le(&t).map_err(|e| e.to_string())?;
    let empirical = c.samples(&t).le_moments().variance;

    let small = table(0.5, 0.502, 0.3, 0.3, 2.0, 60);
    let dmax = max_dtheta(&small);
    let series = variance_le(&small).map_err(|e| e.to_string())?;
    let closed = smallquench_variance(&small);

    let betas: Vec<f64> = (0..10).map(|i| 10f64.powf(-1.0 + 3.0 * i as f64 / 9.0)).collect();
    let vars = betas
        .iter()
        .map(|&b| variance_le(&table(0.5, 0.5, 0.25, 0.1, b, 80)))
        .collect::<Result<Vec<f64>, _>>()
        .map_err(|e| e.to_string())?;
    let monotone = vars.windows(2).all(|w| w[0] <= w[1] * (1.0 + 1e-12));

    let ok = within(empirical, analytic, 0.05) && dmax < 0.01 && within(closed, series, 0.01) && monotone;
    Ok((
        ok,
        format!(
            "analytic={analytic:.6e} empirical={empirical:.6e} max|dtheta|={dmax:.4} series={series:.6e} closed={closed:.6e} monotone={monotone} grid={:?}",
            vars.iter().map(|v| format!("{v:.3e}")).collect::<Vec<_>>()
        ),
    ))
}

/// Trapezoid rule over a full period of a smooth periodic integrand, which
/// converges geometrically.
fn periodic_trapezoid<F: Fn(f64) -> f64>(f: F, period: f64, n: usize) -> f64 {
    let h = period / n as f64;
    (0..n).map(|i| f(i as f64 * h)).sum::<f64>() * h
}

fn special_functions(_: &Ctx) -> Outcome {
    let exact = elliptic_e(0.0).unwrap() == PI / 2.0 && bessel_j0(0.0) == 1.0;
    let mut e_err: f64 = 0.0;
    for i in 0..=200 {
        let m = 0.999 * i as f64 / 200.0;
        let oracle = 0.25 * periodic_trapezoid(|th| (1.0 - m * th.sin().powi(2)).sqrt(), 2.0 * PI, 40_000);
        e_err = e_err.max((elliptic_e(m).unwrap() - oracle).abs());
    }
    let mut j_err: f64 = 0.0;
    for i in 0..=1000 {
        let x = 0.05 * i as f64;
        let oracle = periodic_trapezoid(|th| (x * th.sin()).cos(), 2.0 * PI, 4000) / (2.0 * PI);
        j_err = j_err.max((bessel_j0(x) - oracle).abs());
    }
    let ok = exact && e_err <= 1e-12 && j_err <= 1e-10;
    Ok((ok, format!("exact_at_zero={exact} max_E_error={e_err:.2e} max_J0_error={j_err:.2e}")))
}

fn bell_widths(_: &Ctx) -> Outcome {
    let mut ratios = Vec::new();
    for h0 in [0.9, 0.95, 0.99] {
        ratios.push(("h0", h0, ising_width(h0).map_err(|e| e.to_string())? / (1.0 - h0)));
    }
    for g in [0.01, 0.05, 0.1] {
        ratios.push(("gamma0", g, aniso_width(g).map_err(|e| e.to_string())? / g));
    }
    let ok = ratios.iter().all(|r| within(r.2, 1.8, 0.1));
    let text: Vec<String> = ratios.iter().map(|(n, v, r)| format!("{n}={v}:{r:.4}")).collect();
    Ok((ok, format!("width/gap {}", text.join(" "))))
}

fn main() -> ExitCode {
    let ctx = Ctx {
        pool: pool(threads_from_env()),
        fixture: VerifyConfig::default(),
    };
    let criteria: [Criterion; 12] = [
        ("oracle equivalence", oracle_equivalence),
        ("bound suite", bound_suite),
        ("short-time decay and mean echo", decay_and_mean),
        ("short-time extensivity", extensivity),
        ("quasi-critical temperature crossover", temperature_crossover),
        ("merged and split peaks", merged_and_split),
        ("characteristic function", characteristic_function),
        ("appendix inequalities", appendix),
        ("perturbation theory", perturbation),
        ("variance", variance),
        ("special functions", special_functions),
        ("bell-curve widths", bell_widths),
    ];
    let mut failed = 0;
    let mut out = std::io::stdout().lock();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (ok, detail) = check(&ctx).unwrap_or_else(|e| (false, format!("error: {e}")));
        failed += usize::from(!ok);
        let tag = if ok { "PASS" } else { "FAIL" };
        writeln!(out, "{tag} {:>2} {name}: {detail}", i + 1).unwrap();
        out.flush().unwrap();
    }
    writeln!(out, "acceptance: {} passed, {failed} failed", criteria.len() - failed).unwrap();
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
