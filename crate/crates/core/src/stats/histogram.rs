use alloc::vec::Vec;

use libm::{cbrt, ceil, floor};

use crate::{Error, Result};

const MAX_AUTO_BINS: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn bin_width(&self) -> f64 {
        (self.hi - self.lo) / self.bins() as f64
    }

    pub fn center(&self, i: usize) -> f64 {
        self.lo + (i as f64 + 0.5) * self.bin_width()
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.bins()).map(|i| self.center(i)).collect()
    }

    /// Counts normalized to a probability density.
    pub fn density(&self) -> Vec<f64> {
        let total: u64 = self.counts.iter().sum();
        let norm = 1.0 / (total as f64 * self.bin_width());
        self.counts.iter().map(|&c| c as f64 * norm).collect()
    }
}

/// Freedman–Diaconis bin count, `range / (2 IQR n^{-1/3})`.
pub fn freedman_diaconis(values: &[f64]) -> usize {
    let mut v: Vec<f64> = values.iter().copied().filter(|x| x.is_finite()).collect();
    if v.len() < 2 {
        return 1;
    }
    v.sort_unstable_by(f64::total_cmp);
    let q = |p: f64| {
        let pos = p * (v.len() - 1) as f64;
        let i = floor(pos) as usize;
        let frac = pos - i as f64;
        if i + 1 < v.len() {
            v[i] + frac * (v[i + 1] - v[i])
        } else {
            v[i]
        }
    };
    let iqr = q(0.75) - q(0.25);
    let range = v[v.len() - 1] - v[0];
    if iqr <= 0.0 || range <= 0.0 {
        return 1;
    }
    let width = 2.0 * iqr / cbrt(v.len() as f64);
    (ceil(range / width) as usize).clamp(1, MAX_AUTO_BINS)
}

/// Equal-width histogram over the sample range; `bins = 0` picks the count
/// by the Freedman–Diaconis rule.
pub fn histogram(values: &[f64], bins: usize) -> Result<Histogram> {
    if values.is_empty() {
        return Err(Error::NoSamples);
    }
    let bins = if bins == 0 {
        freedman_diaconis(values)
    } else {
        bins
    };
    if let Some(&bad) = values.iter().find(|x| !x.is_finite()) {
        return Err(Error::NonFinite {
            name: "sample",
            value: bad,
        });
    }
    let (mut lo, mut hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    if hi == lo {
        let pad = if lo == 0.0 { 0.5 } else { 0.5 * lo.abs() * f64::EPSILON * 1e3 };
        lo -= pad;
        hi += pad;
    }
    let mut counts = alloc::vec![0u64; bins];
    let scale = bins as f64 / (hi - lo);
    for &x in values {
        let i = ((x - lo) * scale) as usize;
        counts[i.min(bins - 1)] += 1;
    }
    Ok(Histogram { lo, hi, counts })
}

/// Centered moving average with the window truncated at the edges.
pub fn smooth(counts: &[u64], window: usize) -> Vec<f64> {
    let n = counts.len();
    let half = window / 2;
    (0..n)
        .map(|i| {
            let a = i.saturating_sub(half);
            let b = (i + half + 1).min(n);
            counts[a..b].iter().sum::<u64>() as f64 / (b - a) as f64
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Peak {
    pub index: usize,
    pub height: f64,
    pub prominence: f64,
}

/// Local maxima of `y` whose topographic prominence is at least
/// `min_prominence` times the global maximum.
///
/// A plateau counts once, at its left end. The prominence of a peak is its
/// height above the higher of the two lowest points reached before a higher
/// value (or the edge) on either side.
pub fn find_peaks(y: &[f64], min_prominence: f64) -> Vec<Peak> {
    let n = y.len();
    let ymax = y.iter().copied().fold(0.0, f64::max);
    if n == 0 || ymax <= 0.0 {
        return Vec::new();
    }
    let mut peaks = Vec::new();
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && y[j + 1] == y[i] {
            j += 1;
        }
        let left_ok = i == 0 || y[i - 1] < y[i];
        let right_ok = j + 1 == n || y[j + 1] < y[i];
        if left_ok && right_ok && y[i] > 0.0 {
            let h = y[i];
            let mut left_min = h;
            for &v in y[..i].iter().rev() {
                if v > h {
                    break;
                }
                left_min = left_min.min(v);
            }
            let mut right_min = h;
            for &v in &y[j + 1..] {
                if v > h {
                    break;
                }
                right_min = right_min.min(v);
            }
            let prominence = h - left_min.max(right_min);
            if prominence >= min_prominence * ymax {
                peaks.push(Peak {
                    index: i,
                    height: h,
                    prominence,
                });
            }
        }
        i = j + 1;
    }
    peaks
}
