use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("chain length must be an even integer >= 2, got {0}")]
    InvalidLength(usize),

    #[error("inverse temperature must be positive and finite, got {0}")]
    InvalidBeta(f64),

    #[error("temperature must be positive and finite, got {0}")]
    InvalidTemperature(f64),

    #[error("quench parameter `{name}` is not finite ({value})")]
    NonFinite { name: &'static str, value: f64 },

    #[error("gapless mode at k = {k}: the product of pre- and post-quench energies vanishes")]
    GaplessMode { k: f64 },

    #[error("elliptic parameter {0} outside [0, 1]")]
    EllipticDomain(f64),

    #[error("moment series for mode {mode} did not converge within {terms} terms")]
    SeriesNotConverged { mode: usize, terms: usize },

    #[error("observation horizon must be positive and finite, got {0}")]
    InvalidHorizon(f64),

    #[error("at least one sample is required")]
    NoSamples,

    #[error("histogram needs at least one bin")]
    NoBins,

    #[error("{curve}: frequency {omega} outside the band [{lo}, {hi}]")]
    OutsideBand {
        curve: &'static str,
        omega: f64,
        lo: f64,
        hi: f64,
    },

    #[error("{curve}: degenerate band for parameter {value}")]
    DegenerateBand { curve: &'static str, value: f64 },

    #[error("damping order must be 1 or 2, got {0}")]
    InvalidDampingOrder(u32),
}
