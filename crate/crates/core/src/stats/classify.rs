use alloc::vec::Vec;

use libm::sqrt;

use super::histogram::{find_peaks, histogram, smooth};
use super::weights::WeightSpectrum;
use crate::Result;

/// Below this many samples the histogram cross-check is skipped.
pub const MIN_SAMPLES_FOR_HISTOGRAM: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Label {
    DoublePeaked,
    MergedSinglePeak,
    Gaussian,
    Indeterminate,
}

impl Label {
    pub fn as_str(&self) -> &'static str {
        match self {
            Label::DoublePeaked => "DoublePeaked",
            Label::MergedSinglePeak => "MergedSinglePeak",
            Label::Gaussian => "Gaussian",
            Label::Indeterminate => "Indeterminate",
        }
    }

    /// Number of histogram modes the label implies.
    pub fn expected_peaks(&self) -> Option<usize> {
        match self {
            Label::DoublePeaked => Some(2),
            Label::MergedSinglePeak | Label::Gaussian => Some(1),
            Label::Indeterminate => None,
        }
    }
}

impl core::fmt::Display for Label {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct ClassifierConfig {
    /// Dominance threshold `r*`.
    pub r_star: f64,
    /// Peak-splitting threshold `w`, in units of `σ_rest`.
    pub width_factor: f64,
    /// Histogram bins; 0 selects Freedman–Diaconis.
    pub bins: usize,
    pub smoothing_window: usize,
    /// Minimum peak prominence relative to the smoothed maximum.
    pub min_prominence: f64,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        ClassifierConfig {
            r_star: 0.6,
            width_factor: 3.0,
            bins: 200,
            smoothing_window: 5,
            min_prominence: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Classification {
    pub label: Label,
    /// Label from the weight rule alone.
    pub weight_label: Label,
    /// `(a₁ + a₂)/Σa`; zero for a degenerate spectrum.
    pub dominance: f64,
    pub a1: f64,
    pub a2: f64,
    /// `sqrt(½ Σ_{k>2} a_k²)`, the spread contributed by the other modes.
    pub sigma_rest: f64,
    pub kappa2: f64,
    pub z_bar: f64,
    /// `Z̄ ∓ |a₁ − a₂|`.
    pub predicted_peaks: (f64, f64),
    /// Positions of the smoothed histogram modes, when checked.
    pub histogram_peaks: Option<Vec<f64>>,
    /// True when every weight vanishes and `Z` has no spread.
    pub degenerate: bool,
}

/// The weight rule: `DoublePeaked` when `r > r*` and `|a₁ − a₂| > w σ_rest`,
/// `MergedSinglePeak` when `r > r*` otherwise, `Gaussian` when `r ≤ r*`.
pub fn classify_weights(spectrum: &WeightSpectrum, config: &ClassifierConfig) -> Classification {
    let sorted = spectrum.sorted();
    let total: f64 = sorted.iter().sum();
    let a1 = sorted.first().copied().unwrap_or(0.0);
    let a2 = sorted.get(1).copied().unwrap_or(0.0);
    let rest: f64 = sorted.iter().skip(2).map(|a| a * a).sum();
    let sigma_rest = sqrt(0.5 * rest);
    let z_bar = -total;
    let split = (a1 - a2).abs();
    let degenerate = !(total > 0.0);
    let dominance = if degenerate { 0.0 } else { (a1 + a2) / total };
    let weight_label = if degenerate {
        Label::Indeterminate
    } else if dominance > config.r_star {
        if split > config.width_factor * sigma_rest {
            Label::DoublePeaked
        } else {
            Label::MergedSinglePeak
        }
    } else {
        Label::Gaussian
    };
    Classification {
        label: weight_label,
        weight_label,
        dominance,
        a1,
        a2,
        sigma_rest,
        kappa2: spectrum.kappa2(),
        z_bar,
        predicted_peaks: (z_bar - split, z_bar + split),
        histogram_peaks: None,
        degenerate,
    }
}

/// Weight rule plus a histogram cross-check on samples of `Z`; a
/// disagreement in the number of modes yields `Indeterminate`.
pub fn classify(
    spectrum: &WeightSpectrum,
    z_samples: &[f64],
    config: &ClassifierConfig,
) -> Result<Classification> {
    let mut c = classify_weights(spectrum, config);
    if c.degenerate || z_samples.len() < MIN_SAMPLES_FOR_HISTOGRAM {
        return Ok(c);
    }
    let h = histogram(z_samples, config.bins)?;
    let smoothed = smooth(&h.counts, config.smoothing_window);
    let peaks: Vec<f64> = find_peaks(&smoothed, config.min_prominence)
        .iter()
        .map(|p| h.center(p.index))
        .collect();
    if c.weight_label.expected_peaks() != Some(peaks.len()) {
        c.label = Label::Indeterminate;
    }
    c.histogram_peaks = Some(peaks);
    Ok(c)
}
