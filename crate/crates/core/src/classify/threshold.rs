//! Single threshold on the magnitude feature.

use serde::{Deserialize, Serialize};

use super::{require_both_classes, Label};
use crate::error::{Error, Result};

/// Largest number of consecutive measurements a vote may combine.
pub const MAX_CONSECUTIVE: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    /// Positive when the value is above the threshold.
    Above,
    Below,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdModel {
    pub threshold: f64,
    pub polarity: Polarity,
    /// Balanced accuracy on the training data.
    pub train_balanced_accuracy: f64,
}

impl ThresholdModel {
    pub fn vote(&self, value: f64) -> Label {
        let above = value > self.threshold;
        let positive = match self.polarity {
            Polarity::Above => above,
            Polarity::Below => value < self.threshold,
        };
        if positive {
            Label::Positive
        } else {
            Label::Negative
        }
    }

    /// Signed distance past the threshold in the positive direction.
    pub fn decision_value(&self, value: f64) -> f64 {
        match self.polarity {
            Polarity::Above => value - self.threshold,
            Polarity::Below => self.threshold - value,
        }
    }
}

fn balanced_accuracy(model: &ThresholdModel, values: &[f64], labels: &[Label]) -> f64 {
    let (mut tp, mut p, mut tn, mut n) = (0usize, 0usize, 0usize, 0usize);
    for (&v, &l) in values.iter().zip(labels) {
        let pred = model.vote(v);
        if l.is_positive() {
            p += 1;
            tp += pred.is_positive() as usize;
        } else {
            n += 1;
            tn += (!pred.is_positive()) as usize;
        }
    }
    0.5 * (tp as f64 / p as f64 + tn as f64 / n as f64)
}

/// Scan midpoints between consecutive distinct values, both polarities,
/// keeping the best training balanced accuracy. Ties go to the smaller
/// threshold, then to `Above`.
pub fn train_threshold(values: &[f64], labels: &[Label]) -> Result<ThresholdModel> {
    if values.len() != labels.len() {
        return Err(Error::Precondition("values and labels differ in length".into()));
    }
    require_both_classes(labels)?;
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numeric("non-finite magnitude".into()));
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    sorted.dedup();
    let mut candidates: Vec<f64> = sorted.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    if candidates.is_empty() {
        candidates.push(sorted[0]);
    }
    let mut best: Option<ThresholdModel> = None;
    for &t in &candidates {
        for polarity in [Polarity::Above, Polarity::Below] {
            let mut m = ThresholdModel {
                threshold: t,
                polarity,
                train_balanced_accuracy: 0.0,
            };
            m.train_balanced_accuracy = balanced_accuracy(&m, values, labels);
            if best.is_none_or(|b| m.train_balanced_accuracy > b.train_balanced_accuracy) {
                best = Some(m);
            }
        }
    }
    Ok(best.expect("at least one candidate"))
}

/// Majority vote over `N` consecutive magnitudes; an even split is positive.
pub fn classify_threshold(model: &ThresholdModel, values: &[f64]) -> Result<Label> {
    if values.is_empty() || values.len() > MAX_CONSECUTIVE {
        return Err(Error::Precondition(format!(
            "vote needs 1 to {MAX_CONSECUTIVE} measurements, got {}",
            values.len()
        )));
    }
    let pos = values.iter().filter(|&&v| model.vote(v).is_positive()).count();
    Ok(if 2 * pos >= values.len() {
        Label::Positive
    } else {
        Label::Negative
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use Label::{Negative as N, Positive as P};

    #[test]
    fn separable_midpoint() {
        let m = train_threshold(&[0.1, 0.2, 0.8, 0.9], &[N, N, P, P]).unwrap();
        assert_eq!(m.threshold, 0.5);
        assert_eq!(m.polarity, Polarity::Above);
        assert_eq!(m.train_balanced_accuracy, 1.0);
    }

    #[test]
    fn interleaved_best_is_three_quarters() {
        let m = train_threshold(&[0.1, 0.2, 0.3, 0.4], &[N, P, N, P]).unwrap();
        assert_eq!(m.train_balanced_accuracy, 0.75);
    }

    #[test]
    fn identical_distributions_still_return() {
        let m = train_threshold(&[0.5, 0.5, 0.5, 0.5], &[N, P, N, P]).unwrap();
        assert_eq!(m.train_balanced_accuracy, 0.5);
        assert!(train_threshold(&[0.1, 0.2], &[P, P]).is_err());
    }

    #[test]
    fn voting_rules() {
        let m = ThresholdModel {
            threshold: 0.5,
            polarity: Polarity::Above,
            train_balanced_accuracy: 1.0,
        };
        assert_eq!(classify_threshold(&m, &[0.7]).unwrap(), P);
        assert_eq!(classify_threshold(&m, &[0.9, 0.9, 0.9, 0.9, 0.1, 0.1, 0.1]).unwrap(), P);
        assert_eq!(classify_threshold(&m, &[0.9, 0.9, 0.1, 0.1]).unwrap(), P);
        assert_eq!(classify_threshold(&m, &[0.9, 0.1, 0.1]).unwrap(), N);
        assert!(classify_threshold(&m, &[]).is_err());
        assert!(classify_threshold(&m, &[0.1; 8]).is_err());
    }

    proptest! {
        #[test]
        fn invariant_under_monotone_transform(
            v in prop::collection::vec(0.0f64..10.0, 4..30),
            flips in prop::collection::vec(any::<bool>(), 30),
        ) {
            let mut labels: Vec<Label> = v.iter().zip(&flips).map(|(_, &f)| if f { P } else { N }).collect();
            labels[0] = P;
            labels[1] = N;
            let f = |x: f64| (x * 0.3).exp() + x;
            let tv: Vec<f64> = v.iter().map(|&x| f(x)).collect();
            let a = train_threshold(&v, &labels).unwrap();
            let b = train_threshold(&tv, &labels).unwrap();
            prop_assert_eq!(a.polarity, b.polarity);
            prop_assert_eq!(a.train_balanced_accuracy, b.train_balanced_accuracy);
            // only comparisons against observed values are preserved; points
            // inside the chosen gap may land on either side
            for &x in &v {
                prop_assert_eq!(a.vote(x), b.vote(f(x)));
            }
        }
    }
}
