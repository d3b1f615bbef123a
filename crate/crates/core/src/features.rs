//! Eleven arithmetic statistics of ring-sample magnitudes and their
//! min-max normalization.

use serde::{Deserialize, Serialize};

use crate::dynarray::RingSampleSet;
use crate::error::{Error, Result};

pub const N_FEATURES: usize = 11;

/// Column names in storage order.
pub const FEATURE_NAMES: [&str; N_FEATURES] = [
    "mean",
    "median",
    "max",
    "std",
    "var",
    "max_minus_min",
    "max_minus_mean",
    "max_minus_median",
    "mean_minus_min",
    "median_minus_min",
    "median_minus_mean",
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub mean: f64,
    pub median: f64,
    pub max: f64,
    pub std: f64,
    pub var: f64,
    pub max_minus_min: f64,
    pub max_minus_mean: f64,
    pub max_minus_median: f64,
    pub mean_minus_min: f64,
    pub median_minus_min: f64,
    pub median_minus_mean: f64,
    /// L2 norm of the normalized features; `None` before normalization.
    pub magnitude: Option<f64>,
}

impl FeatureVector {
    pub fn to_array(&self) -> [f64; N_FEATURES] {
        [
            self.mean,
            self.median,
            self.max,
            self.std,
            self.var,
            self.max_minus_min,
            self.max_minus_mean,
            self.max_minus_median,
            self.mean_minus_min,
            self.median_minus_min,
            self.median_minus_mean,
        ]
    }

    pub fn from_array(a: [f64; N_FEATURES], magnitude: Option<f64>) -> Self {
        FeatureVector {
            mean: a[0],
            median: a[1],
            max: a[2],
            std: a[3],
            var: a[4],
            max_minus_min: a[5],
            max_minus_mean: a[6],
            max_minus_median: a[7],
            mean_minus_min: a[8],
            median_minus_min: a[9],
            median_minus_mean: a[10],
            magnitude,
        }
    }
}

/// Features of a list of non-negative magnitudes.
pub fn extract_from_magnitudes(mags: &[f64]) -> Result<FeatureVector> {
    if mags.len() < 2 {
        return Err(Error::Precondition(format!(
            "feature extraction needs at least 2 samples, got {}",
            mags.len()
        )));
    }
    if mags.iter().any(|x| !x.is_finite()) {
        return Err(Error::Numeric("non-finite sample magnitude".into()));
    }
    let n = mags.len();
    let mut sorted = mags.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let min = sorted[0];
    let max = sorted[n - 1];
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    };
    let mean = mags.iter().sum::<f64>() / n as f64;
    let var = mags.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n as f64;
    let std = var.sqrt();
    Ok(FeatureVector {
        mean,
        median,
        max,
        std,
        var,
        max_minus_min: max - min,
        max_minus_mean: max - mean,
        max_minus_median: max - median,
        mean_minus_min: mean - min,
        median_minus_min: median - min,
        median_minus_mean: median - mean,
        magnitude: None,
    })
}

/// Statistics over `|value_k|`; phase is discarded.
pub fn extract(samples: &RingSampleSet) -> Result<FeatureVector> {
    extract_from_magnitudes(&samples.magnitudes())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Normalizer {
    pub min: [f64; N_FEATURES],
    pub max: [f64; N_FEATURES],
}

impl Normalizer {
    /// Features whose training range collapsed to a point.
    pub fn degenerate(&self) -> Vec<&'static str> {
        (0..N_FEATURES)
            .filter(|&i| self.max[i] == self.min[i])
            .map(|i| FEATURE_NAMES[i])
            .collect()
    }

    /// Min-max scaled features with the magnitude filled in. Test data outside
    /// the training range may scale outside [0, 1].
    pub fn apply(&self, fv: &FeatureVector) -> FeatureVector {
        let a = fv.to_array();
        let mut s = [0.0; N_FEATURES];
        for i in 0..N_FEATURES {
            let span = self.max[i] - self.min[i];
            s[i] = if span > 0.0 { (a[i] - self.min[i]) / span } else { 0.0 };
        }
        let magnitude = s.iter().map(|x| x * x).sum::<f64>().sqrt();
        FeatureVector::from_array(s, Some(magnitude))
    }
}

pub fn fit_normalizer(train: &[FeatureVector]) -> Result<Normalizer> {
    if train.len() < 2 {
        return Err(Error::Precondition(format!(
            "normalizer needs at least 2 vectors, got {}",
            train.len()
        )));
    }
    let mut min = [f64::INFINITY; N_FEATURES];
    let mut max = [f64::NEG_INFINITY; N_FEATURES];
    for fv in train {
        for (i, x) in fv.to_array().into_iter().enumerate() {
            min[i] = min[i].min(x);
            max[i] = max[i].max(x);
        }
    }
    let norm = Normalizer { min, max };
    let degenerate = norm.degenerate();
    if !degenerate.is_empty() {
        log::warn!("degenerate features map to 0: {}", degenerate.join(", "));
    }
    Ok(norm)
}
