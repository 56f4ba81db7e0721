//! Run configuration shared by every subcommand.
//!
//! A config file is JSON with exactly the field names of [`RunConfig`];
//! missing fields take their defaults and unknown ones are rejected.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thermecho_core::stats::sampling::{DEFAULT_SAMPLES, DEFAULT_SEED, DEFAULT_TAU_FACTOR};
use thermecho_core::stats::ClassifierConfig;
use thermecho_core::{QuenchParams, Temperature};

use crate::error::{CliError, CliResult};
use crate::verify::VerifyConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Continuum weight profile emitted next to the per-mode weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum BellCurve {
    /// Field quench of the Ising chain, `c(ω)`.
    Ising,
    /// Anisotropy quench at zero field, `c_a(ω)`.
    Anisotropy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    H0,
    H1,
    Gamma0,
    Gamma1,
    Beta,
    Temperature,
    Length,
}

impl Axis {
    pub fn name(&self) -> &'static str {
        match self {
            Axis::H0 => "h0",
            Axis::H1 => "h1",
            Axis::Gamma0 => "gamma0",
            Axis::Gamma1 => "gamma1",
            Axis::Beta => "beta",
            Axis::Temperature => "temperature",
            Axis::Length => "length",
        }
    }
}

/// `steps` equally spaced values from `start` to `stop` inclusive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    pub axis: Axis,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl SweepAxis {
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let d = (self.stop - self.start) / (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| if i + 1 == self.steps { self.stop } else { self.start + d * i as f64 })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub length: usize,
    pub h0: f64,
    pub h1: f64,
    pub gamma0: f64,
    pub gamma1: f64,
    /// Inverse temperature; exclusive with `temperature`.
    pub beta: Option<f64>,
    pub temperature: Option<f64>,
    pub zero_temperature: bool,
    /// Temperature ladder for `distribution`; overrides the single state.
    pub temperatures: Vec<f64>,
    pub tmax: f64,
    pub time_steps: usize,
    pub tau_factor: f64,
    pub samples: usize,
    pub seed: u64,
    pub second_order: bool,
    pub classifier: ClassifierConfig,
    pub bell: Option<BellCurve>,
    pub bell_points: usize,
    pub sweep: Vec<SweepAxis>,
    #[serde(deserialize_with = "VerifyConfig::deserialize_merged")]
    pub verify: VerifyConfig,
    pub output: PathBuf,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            length: 80,
            h0: 0.5,
            h1: 0.5,
            gamma0: 0.25,
            gamma1: 0.1,
            beta: None,
            temperature: None,
            zero_temperature: false,
            temperatures: Vec::new(),
            tmax: 50.0,
            time_steps: 1001,
            tau_factor: DEFAULT_TAU_FACTOR,
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
            second_order: false,
            classifier: ClassifierConfig::default(),
            bell: None,
            bell_points: 401,
            sweep: Vec::new(),
            verify: VerifyConfig::default(),
            output: PathBuf::from("out"),
            format: Format::Csv,
        }
    }
}

/// `β` used when neither `beta`, `temperature` nor `zero_temperature` is set.
pub const DEFAULT_BETA: f64 = 10.0;

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))
    }

    pub fn state(&self) -> CliResult<Temperature> {
        match (self.beta, self.temperature, self.zero_temperature) {
            (Some(_), Some(_), _) => Err(invalid("set either beta or temperature, not both")),
            (Some(_), _, true) | (_, Some(_), true) => {
                Err(invalid("zero_temperature excludes beta and temperature"))
            }
            (_, _, true) => Ok(Temperature::Zero),
            (Some(b), None, false) => Ok(Temperature::Beta(b)),
            (None, Some(t), false) => Ok(Temperature::from_temperature(t)?),
            (None, None, false) => Ok(Temperature::Beta(DEFAULT_BETA)),
        }
    }

    pub fn params(&self) -> CliResult<QuenchParams> {
        let p = QuenchParams {
            h0: self.h0,
            h1: self.h1,
            gamma0: self.gamma0,
            gamma1: self.gamma1,
            temperature: self.state()?,
            length: self.length,
        };
        p.validate()?;
        Ok(p)
    }

    /// One parameter set per ladder temperature, or the single state.
    pub fn ladder(&self) -> CliResult<Vec<QuenchParams>> {
        let base = self.params()?;
        if self.temperatures.is_empty() {
            return Ok(vec![base]);
        }
        self.temperatures
            .iter()
            .map(|&t| Ok(base.with_temperature(Temperature::from_temperature(t)?)?))
            .collect()
    }

    pub fn times(&self) -> CliResult<Vec<f64>> {
        if !(self.tmax.is_finite() && self.tmax > 0.0) {
            return Err(invalid(format!("tmax must be positive, got {}", self.tmax)));
        }
        if self.time_steps < 2 {
            return Err(invalid("time_steps must be at least 2"));
        }
        let n = self.time_steps - 1;
        Ok((0..=n).map(|i| self.tmax * i as f64 / n as f64).collect())
    }

    /// Checks everything that does not depend on the subcommand.
    pub fn validate(&self) -> CliResult<()> {
        self.params()?;
        self.ladder()?;
        if !(self.tau_factor.is_finite() && self.tau_factor > 0.0) {
            return Err(invalid(format!("tau_factor must be positive, got {}", self.tau_factor)));
        }
        if self.samples == 0 {
            return Err(invalid("samples must be at least 1"));
        }
        let c = &self.classifier;
        if !(c.r_star > 0.0 && c.r_star < 1.0) {
            return Err(invalid(format!("classifier.r_star must lie in (0, 1), got {}", c.r_star)));
        }
        if !(c.width_factor >= 0.0 && c.min_prominence >= 0.0) || c.smoothing_window == 0 {
            return Err(invalid("classifier thresholds must be non-negative, window at least 1"));
        }
        for s in &self.sweep {
            if s.steps == 0 || !(s.start.is_finite() && s.stop.is_finite()) {
                return Err(invalid(format!("sweep axis {} needs finite bounds and steps >= 1", s.axis.name())));
            }
        }
        Ok(())
    }

    /// The config as embedded in output headers; the output directory is
    /// left out so that files do not depend on where they were written.
    pub fn fingerprint(&self) -> String {
        let mut v = serde_json::to_value(self).expect("config serializes");
        if let Some(map) = v.as_object_mut() {
            map.remove("output");
        }
        v.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let c = RunConfig::default();
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<RunConfig>(&text).unwrap(), c);
        assert_eq!(serde_json::from_str::<RunConfig>("{}").unwrap(), c);
        c.validate().unwrap();
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(serde_json::from_str::<RunConfig>(r#"{"lenght": 4}"#).is_err());
        assert!(serde_json::from_str::<RunConfig>(r#"{"classifier": {"r": 1}}"#).is_err());
    }

    #[test]
    fn temperature_sources() {
        let mut c = RunConfig::default();
        assert_eq!(c.state().unwrap(), Temperature::Beta(DEFAULT_BETA));
        c.temperature = Some(0.5);
        assert_eq!(c.state().unwrap(), Temperature::Beta(2.0));
        c.beta = Some(1.0);
        assert!(c.state().is_err());
        c.temperature = None;
        c.zero_temperature = true;
        assert!(c.state().is_err());
        c.beta = None;
        assert_eq!(c.state().unwrap(), Temperature::Zero);
    }

    #[test]
    fn ladder_and_sweep() {
        let c = RunConfig {
            temperatures: vec![0.02, 0.1],
            ..RunConfig::default()
        };
        let l = c.ladder().unwrap();
        assert_eq!(l.len(), 2);
        assert!((l[1].beta() - 10.0).abs() < 1e-12);
        let s = SweepAxis {
            axis: Axis::H1,
            start: 0.0,
            stop: 1.0,
            steps: 3,
        };
        assert_eq!(s.values(), [0.0, 0.5, 1.0]);
    }

    #[test]
    fn invalid_values() {
        let c = RunConfig {
            length: 3,
            ..RunConfig::default()
        };
        assert!(matches!(c.validate(), Err(CliError::Validation(_))));
        let c = RunConfig {
            samples: 0,
            ..RunConfig::default()
        };
        assert!(c.validate().is_err());
        let c = RunConfig {
            tmax: -1.0,
            ..RunConfig::default()
        };
        assert!(c.times().is_err());
    }

    #[test]
    fn fingerprint_ignores_output() {
        let a = RunConfig::default();
        let b = RunConfig {
            output: "elsewhere".into(),
            ..RunConfig::default()
        };
        assert_eq!(a.fingerprint(), b.fingerprint());
        assert!(!a.fingerprint().contains("output"));
    }
}
