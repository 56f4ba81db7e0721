//! Subcommand drivers. Each one reads a validated [`RunConfig`], writes its
//! tables and a JSON summary, and reports the files and any warnings.

use std::path::PathBuf;

use rayon::ThreadPool;
use serde_json::{json, Value};
use thermecho_core::averages::report;
use thermecho_core::echo::{echo_point, fit_short_time, ln_loschmidt, short_time_coefficient};
use thermecho_core::model::{mode_table, ModeTable};
use thermecho_core::stats::bell::{aniso_band, ising_band};
use thermecho_core::stats::{
    aniso_width, bell_aniso, bell_ising, classify, classify_weights, default_tau, histogram,
    ising_width, sample_times, weights, SampleSet,
};
use thermecho_core::{QuenchParams, Temperature};

use crate::config::{Axis, BellCurve, RunConfig};
use crate::error::{CliError, CliResult};
use crate::io::{Cell, Sink, Table};
use crate::parallel::par_map;
use crate::verify;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub warnings: Vec<String>,
}

fn sink(cfg: &RunConfig) -> CliResult<Sink> {
    Sink::new(&cfg.output, cfg.format, cfg.fingerprint(), cfg.seed)
}

fn state_json(p: &QuenchParams) -> Value {
    json!({
        "h0": p.h0,
        "h1": p.h1,
        "gamma0": p.gamma0,
        "gamma1": p.gamma1,
        "length": p.length,
        "beta": match p.temperature {
            Temperature::Beta(b) => json!(b),
            Temperature::Zero => Value::Null,
        },
        "temperature": p.temperature.temperature(),
    })
}

fn variance_warning(p: &QuenchParams) -> String {
    format!(
        "variance series did not converge for {}; var_le reported as null",
        state_json(p)
    )
}

/// `L(t)`, `L_F(t)` and both bounds on the configured time grid.
pub fn timeseries(cfg: &RunConfig, pool: &ThreadPool) -> CliResult<Outcome> {
    cfg.validate()?;
    let params = cfg.params()?;
    let table = mode_table(&params)?;
    let times = cfg.times()?;
    let points = par_map(pool, &times, |&t| echo_point(&table, t));

    let mut out = Outcome::default();
    let mut t = Table::new("timeseries", &["t", "le", "lef", "lower", "upper"]);
    let (mut lower_slack, mut upper_slack) = (f64::INFINITY, f64::INFINITY);
    for p in &points {
        t.push(vec![p.t.into(), p.le.into(), p.lef.into(), p.lower.into(), p.upper.into()]);
        lower_slack = lower_slack.min(p.le - p.lower);
        upper_slack = upper_slack.min(p.upper - p.le);
    }
    let s = sink(cfg)?;
    out.files.push(s.table(&t)?);

    let avg = report(&table);
    if avg.var_le.is_none() {
        out.warnings.push(variance_warning(&params));
    }
    let fit = fit_short_time(&table, 0.01, 50);
    let summary = json!({
        "params": state_json(&params),
        "d_eff": avg.d_eff,
        "mean_le": avg.mean_le,
        "mean_lef": avg.mean_lef,
        "var_le": avg.var_le,
        "smallquench_var": avg.smallquench_var,
        "equilibrium_purity": avg.equilibrium_purity,
        "short_time_coefficient": short_time_coefficient(&table),
        "short_time_fit": fit,
        "worst_lower_slack": lower_slack,
        "worst_upper_slack": upper_slack,
    });
    out.files.push(s.summary("timeseries_summary", summary)?);
    Ok(out)
}

/// Seeded samples of `Z = ln L(t)` with `t` uniform on `[0, τ)`. Times are
/// drawn sequentially; only the evaluation runs in parallel.
pub fn sample(table: &ModeTable, tau: f64, n: usize, seed: u64, pool: &ThreadPool) -> CliResult<SampleSet> {
    let times = sample_times(tau, n, seed)?;
    let z = par_map(pool, &times, |&t| ln_loschmidt(table, t));
    Ok(SampleSet::from_parts(tau, seed, times, z)?)
}

/// Full-time statistics along the temperature ladder.
pub fn distribution(cfg: &RunConfig, pool: &ThreadPool) -> CliResult<Outcome> {
    cfg.validate()?;
    let s = sink(cfg)?;
    let mut out = Outcome::default();
    let mut entries = Vec::new();
    for (i, params) in cfg.ladder()?.iter().enumerate() {
        let table = mode_table(params)?;
        let tau = default_tau(params.length, cfg.tau_factor);
        let set = sample(&table, tau, cfg.samples, cfg.seed, pool)?;
        let spectrum = weights(&table, cfg.second_order);
        let class = classify(&spectrum, &set.z_values, &cfg.classifier)?;
        let hist = histogram(&set.z_values, cfg.classifier.bins)?;

        let mut samples = Table::new(format!("distribution_{i:02}_samples"), &["t", "z"]);
        for (&t, &z) in set.times.iter().zip(&set.z_values) {
            samples.push(vec![t.into(), z.into()]);
        }
        out.files.push(s.table(&samples)?);
        let mut ht = Table::new(format!("distribution_{i:02}_histogram"), &["z", "count", "density"]);
        for ((c, &n), d) in hist.centers().into_iter().zip(&hist.counts).zip(hist.density()) {
            ht.push(vec![c.into(), Cell::Int(n), d.into()]);
        }
        out.files.push(s.table(&ht)?);

        if class.degenerate {
            out.warnings.push(format!(
                "degenerate distribution at {}: all weights vanish and Z is constant",
                state_json(params)
            ));
        }
        let avg = report(&table);
        entries.push(json!({
            "params": state_json(params),
            "tau": tau,
            "samples": set.len(),
            "classification": class,
            "z_moments": set.z_moments(),
            "le_moments": set.le_moments(),
            "z_mean": set.z_mean,
            "mean_le": avg.mean_le,
            "var_le": avg.var_le,
        }));
    }
    out.files.push(s.summary("distribution", json!({ "ladder": entries }))?);
    Ok(out)
}

/// Per-mode weights, optionally with a continuum bell curve.
pub fn weights_cmd(cfg: &RunConfig, _pool: &ThreadPool) -> CliResult<Outcome> {
    cfg.validate()?;
    let params = cfg.params()?;
    let table = mode_table(&params)?;
    let spectrum = weights(&table, cfg.second_order);
    let s = sink(cfg)?;
    let mut out = Outcome::default();

    let mut t = Table::new("weights", &["k", "a", "a_f", "omega", "bare", "damping", "damping_f"]);
    for m in &spectrum.modes {
        t.push(vec![m.k.into(), m.a.into(), m.a_f.into(), m.omega.into(), m.bare.into(), m.damping.into(), m.damping_f.into()]);
    }
    out.files.push(s.table(&t)?);

    let sorted = spectrum.sorted();
    let class = classify_weights(&spectrum, &cfg.classifier);
    let mut summary = json!({
        "params": state_json(&params),
        "second_order": cfg.second_order,
        "largest": sorted.iter().take(2).collect::<Vec<_>>(),
        "pair_ratio": if sorted.len() > 1 && sorted[0] > 0.0 { json!(sorted[1] / sorted[0]) } else { Value::Null },
        "classification": class,
    });

    if let Some(curve) = cfg.bell {
        let n = cfg.bell_points.max(2);
        let (band, width, scale) = match curve {
            BellCurve::Ising => (ising_band(params.h0)?, ising_width(params.h0)?, (1.0 - params.h0).abs()),
            BellCurve::Anisotropy => (aniso_band(params.gamma0)?, aniso_width(params.gamma0)?, params.gamma0.abs()),
        };
        let mut bt = Table::new("bell", &["omega", "c"]);
        for i in 0..n {
            let w = if i + 1 == n { band.1 } else { band.0 + (band.1 - band.0) * i as f64 / (n - 1) as f64 };
            let c = match curve {
                BellCurve::Ising => bell_ising(w, params.h0, params.h1 - params.h0)?,
                BellCurve::Anisotropy => bell_aniso(w, params.gamma0, params.gamma1 - params.gamma0)?,
            };
            bt.push(vec![w.into(), c.into()]);
        }
        out.files.push(s.table(&bt)?);
        summary["bell"] = json!({
            "curve": curve,
            "band": [band.0, band.1],
            "width": width,
            "width_over_gap": width / scale,
        });
    }
    out.files.push(s.summary("weights_summary", summary)?);
    Ok(out)
}

fn apply(base: &RunConfig, axis: Axis, v: f64) -> CliResult<RunConfig> {
    let mut c = base.clone();
    match axis {
        Axis::H0 => c.h0 = v,
        Axis::H1 => c.h1 = v,
        Axis::Gamma0 => c.gamma0 = v,
        Axis::Gamma1 => c.gamma1 = v,
        Axis::Beta => {
            c.beta = Some(v);
            c.temperature = None;
            c.zero_temperature = false;
        }
        Axis::Temperature => {
            c.temperature = Some(v);
            c.beta = None;
            c.zero_temperature = false;
        }
        Axis::Length => {
            if v.fract() != 0.0 || v < 0.0 {
                return Err(CliError::Validation(format!("length axis value {v} is not an integer")));
            }
            c.length = v as usize;
        }
    }
    Ok(c)
}

/// Cartesian sweep, one summary row per point; the first axis varies slowest.
pub fn scan(cfg: &RunConfig, pool: &ThreadPool) -> CliResult<Outcome> {
    cfg.validate()?;
    if cfg.sweep.is_empty() {
        return Err(CliError::Validation("scan needs at least one sweep axis".into()));
    }
    let mut points: Vec<Vec<f64>> = vec![Vec::new()];
    for axis in &cfg.sweep {
        let vals = axis.values();
        points = points
            .into_iter()
            .flat_map(|p| vals.iter().map(move |&v| [p.as_slice(), &[v]].concat()))
            .collect();
    }
    let configs = points
        .iter()
        .map(|vals| {
            let mut c = cfg.clone();
            for (axis, &v) in cfg.sweep.iter().zip(vals) {
                c = apply(&c, axis.axis, v)?;
            }
            c.params()
        })
        .collect::<CliResult<Vec<QuenchParams>>>()?;

    let rows = par_map(pool, &configs, |p| -> CliResult<_> {
        let table = mode_table(p)?;
        let avg = report(&table);
        let spectrum = weights(&table, cfg.second_order);
        Ok((avg, spectrum.kappa2(), classify_weights(&spectrum, &cfg.classifier)))
    });

    let mut header: Vec<&str> = cfg.sweep.iter().map(|a| a.axis.name()).collect();
    header.extend(["d_eff", "mean_le", "mean_lef", "var_le", "kappa2", "dominance", "label"]);
    let mut t = Table::new("scan", &header);
    let mut out = Outcome::default();
    for ((vals, row), p) in points.iter().zip(rows).zip(&configs) {
        let (avg, kappa2, class) = row?;
        if avg.var_le.is_none() {
            out.warnings.push(variance_warning(p));
        }
        let mut r: Vec<Cell> = vals.iter().map(|&v| v.into()).collect();
        r.extend([
            avg.d_eff.into(),
            avg.mean_le.into(),
            avg.mean_lef.into(),
            avg.var_le.map_or(Cell::Text(String::new()), Cell::Num),
            kappa2.into(),
            class.dominance.into(),
            class.label.as_str().into(),
        ]);
        t.push(r);
    }
    let s = sink(cfg)?;
    out.files.push(s.table(&t)?);
    Ok(out)
}

/// Runs every verification suite; fails after writing the report if any
/// suite fails.
pub fn verify_cmd(cfg: &RunConfig, pool: &ThreadPool) -> CliResult<Outcome> {
    let report = verify::run(&cfg.verify, pool)?;
    let s = sink(cfg)?;
    let path = s.summary("verify", serde_json::to_value(&report).expect("report serializes"))?;
    if !report.passed {
        let failed: Vec<&str> = report.suites.iter().filter(|s| !s.passed).map(|s| s.name).collect();
        return Err(CliError::Verification(format!(
            "{} (report: {})",
            failed.join(", "),
            path.display()
        )));
    }
    Ok(Outcome {
        files: vec![path],
        warnings: Vec::new(),
    })
}
