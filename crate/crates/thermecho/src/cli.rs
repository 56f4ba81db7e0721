use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands::{self, Outcome};
use crate::config::{Axis, BellCurve, Format, RunConfig, SweepAxis};
use crate::error::{CliError, CliResult};
use crate::parallel::{pool, threads_from_env};

#[derive(Debug, Parser)]
#[command(name = "thermecho", version, about = "Finite-temperature Loschmidt echo of quenched XY chains")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Echo, linearized echo and bounds on a time grid.
    Timeseries(Opts),
    /// Sampled distribution of ln L, optionally along a temperature ladder.
    Distribution(Opts),
    /// Per-mode small-quench weights and continuum bell curves.
    Weights(Opts),
    /// Cartesian parameter sweep with one summary row per point.
    Scan(Opts),
    /// Oracle, bound, appendix and perturbation suites.
    Verify(Opts),
}

#[derive(Debug, Clone, Default, Args)]
pub struct Opts {
    /// JSON config file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Chain length, even and at least 2.
    #[arg(long)]
    pub length: Option<usize>,
    /// Transverse field before the quench.
    #[arg(long, allow_hyphen_values = true)]
    pub h0: Option<f64>,
    /// Transverse field after the quench.
    #[arg(long, allow_hyphen_values = true)]
    pub h1: Option<f64>,
    /// Anisotropy before the quench.
    #[arg(long, allow_hyphen_values = true)]
    pub gamma0: Option<f64>,
    /// Anisotropy after the quench.
    #[arg(long, allow_hyphen_values = true)]
    pub gamma1: Option<f64>,
    /// Inverse temperature of the initial Gibbs state (default 10).
    #[arg(long, conflicts_with_all = ["temperature", "zero_temperature"])]
    pub beta: Option<f64>,
    /// Temperature, as an alternative to --beta.
    #[arg(long, conflicts_with = "zero_temperature")]
    pub temperature: Option<f64>,
    /// Start from the ground state.
    #[arg(long)]
    pub zero_temperature: bool,
    /// Comma-separated temperature ladder.
    #[arg(long, value_delimiter = ',')]
    pub temperatures: Option<Vec<f64>>,
    /// End of the time grid for `timeseries`.
    #[arg(long)]
    pub tmax: Option<f64>,
    /// Number of grid points, both ends included.
    #[arg(long)]
    pub time_steps: Option<usize>,
    /// Sampling horizon τ = factor · L².
    #[arg(long)]
    pub tau_factor: Option<f64>,
    /// Number of sampled times.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Seed of the time sampler.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Histogram bins; 0 selects the Freedman–Diaconis rule.
    #[arg(long)]
    pub bins: Option<usize>,
    /// Dominance threshold of the two largest weights.
    #[arg(long)]
    pub r_star: Option<f64>,
    /// Peak-splitting threshold in units of the residual spread.
    #[arg(long)]
    pub width_factor: Option<f64>,
    /// Use `Δθ²` instead of `sin²Δθ` in the weights.
    #[arg(long)]
    pub second_order: bool,
    #[arg(long, value_enum)]
    pub bell: Option<BellCurve>,
    /// Sweep axis as `name=start:stop:steps`; repeatable.
    #[arg(long, value_parser = parse_axis)]
    pub sweep: Vec<SweepAxis>,
    /// Corrupt the product formula during `verify`.
    #[arg(long)]
    pub inject_fault: bool,
    /// Output directory.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

fn parse_axis(s: &str) -> Result<SweepAxis, String> {
    let (name, range) = s.split_once('=').ok_or("expected name=start:stop:steps")?;
    let axis: Axis = serde_json::from_value(serde_json::Value::String(name.to_owned()))
        .map_err(|_| format!("unknown axis `{name}`"))?;
    let parts: Vec<&str> = range.split(':').collect();
    let [start, stop, steps] = parts[..] else {
        return Err("expected start:stop:steps".into());
    };
    Ok(SweepAxis {
        axis,
        start: start.parse().map_err(|e| format!("{e}"))?,
        stop: stop.parse().map_err(|e| format!("{e}"))?,
        steps: steps.parse().map_err(|e| format!("{e}"))?,
    })
}

impl Opts {
    /// The config file (or defaults) with every given flag applied.
    pub fn resolve(&self) -> CliResult<RunConfig> {
        let mut c = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        macro_rules! set {
            ($($field:ident),*) => {$(
                if let Some(v) = self.$field.clone() {
                    c.$field = v;
                }
            )*};
        }
        set!(length, h0, h1, gamma0, gamma1, tmax, time_steps, tau_factor, samples, seed, output, format, temperatures);
        if let Some(b) = self.beta {
            c.beta = Some(b);
            c.temperature = None;
            c.zero_temperature = false;
        }
        if let Some(t) = self.temperature {
            c.temperature = Some(t);
            c.beta = None;
            c.zero_temperature = false;
        }
        if self.zero_temperature {
            c.zero_temperature = true;
            c.beta = None;
            c.temperature = None;
        }
        if let Some(b) = self.bins {
            c.classifier.bins = b;
        }
        if let Some(r) = self.r_star {
            c.classifier.r_star = r;
        }
        if let Some(w) = self.width_factor {
            c.classifier.width_factor = w;
        }
        if self.bell.is_some() {
            c.bell = self.bell;
        }
        if !self.sweep.is_empty() {
            c.sweep = self.sweep.clone();
        }
        c.second_order |= self.second_order;
        c.verify.inject_fault |= self.inject_fault;
        Ok(c)
    }
}

type Driver = fn(&RunConfig, &rayon::ThreadPool) -> CliResult<Outcome>;

pub fn run(cli: &Cli) -> CliResult<Outcome> {
    let (opts, f): (&Opts, Driver) = match &cli.command {
        Command::Timeseries(o) => (o, commands::timeseries),
        Command::Distribution(o) => (o, commands::distribution),
        Command::Weights(o) => (o, commands::weights_cmd),
        Command::Scan(o) => (o, commands::scan),
        Command::Verify(o) => (o, commands::verify_cmd),
    };
    let cfg = opts.resolve()?;
    f(&cfg, &pool(threads_from_env()))
}

/// Parses arguments; usage errors map to the validation exit code.
pub fn parse<I, T>(args: I) -> Result<Cli, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    Cli::try_parse_from(args)
}

impl From<clap::Error> for CliError {
    fn from(e: clap::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}
