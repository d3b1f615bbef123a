//! Confusion counts and the four detection metrics.

use serde::{Deserialize, Serialize};

use crate::classify::Label;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl ConfusionCounts {
    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }

    pub fn record(&mut self, truth: Label, predicted: Label) {
        match (truth.is_positive(), predicted.is_positive()) {
            (true, true) => self.tp += 1,
            (true, false) => self.fn_ += 1,
            (false, true) => self.fp += 1,
            (false, false) => self.tn += 1,
        }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Label, Label)>) -> Self {
        let mut c = ConfusionCounts::default();
        for (t, p) in pairs {
            c.record(t, p);
        }
        c
    }
}

/// Each metric is `None` when its denominator is zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricSet {
    pub tpr: Option<f64>,
    pub fpr: Option<f64>,
    pub acc: Option<f64>,
    pub f1: Option<f64>,
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

pub fn metrics(c: &ConfusionCounts) -> Result<MetricSet> {
    if c.total() == 0 {
        return Err(Error::Precondition("confusion counts are all zero".into()));
    }
    Ok(MetricSet {
        tpr: ratio(c.tp, c.tp + c.fn_),
        fpr: ratio(c.fp, c.fp + c.tn),
        acc: ratio(c.tp + c.tn, c.total()),
        f1: ratio(2 * c.tp, 2 * c.tp + c.fn_ + c.fp),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn perfect() {
        let m = metrics(&ConfusionCounts { tp: 24, fp: 0, tn: 24, fn_: 0 }).unwrap();
        assert_eq!((m.tpr, m.fpr, m.acc, m.f1), (Some(1.0), Some(0.0), Some(1.0), Some(1.0)));
    }

    #[test]
    fn best_row_counts() {
        let m = metrics(&ConfusionCounts { tp: 989, fn_: 11, fp: 17, tn: 983 }).unwrap();
        assert!((m.acc.unwrap() - 0.986).abs() < 1e-12);
        assert!((m.f1.unwrap() - 1978.0 / 2006.0).abs() < 1e-12);
        assert!((m.f1.unwrap() - 0.9860).abs() < 5e-4);
    }

    #[test]
    fn always_negative() {
        let m = metrics(&ConfusionCounts { tp: 0, fn_: 10, fp: 0, tn: 10 }).unwrap();
        assert_eq!((m.tpr, m.fpr, m.acc, m.f1), (Some(0.0), Some(0.0), Some(0.5), Some(0.0)));
    }

    #[test]
    fn undefined_is_not_zero() {
        let m = metrics(&ConfusionCounts { tp: 0, fn_: 0, fp: 3, tn: 2 }).unwrap();
        assert_eq!(m.tpr, None);
        assert!(metrics(&ConfusionCounts::default()).is_err());
    }

    proptest! {
        #[test]
        fn identities(tp in 0u64..500, fp in 0u64..500, tn in 0u64..500, fn_ in 0u64..500) {
            prop_assume!(tp + fp + tn + fn_ > 0);
            let c = ConfusionCounts { tp, fp, tn, fn_ };
            let m = metrics(&c).unwrap();
            let acc = m.acc.unwrap();
            prop_assert!((acc * c.total() as f64 - (tp + tn) as f64).abs() < 1e-9);
            if tp > 0 {
                let precision = tp as f64 / (tp + fp) as f64;
                let recall = tp as f64 / (tp + fn_) as f64;
                let h = 2.0 * precision * recall / (precision + recall);
                prop_assert!((m.f1.unwrap() - h).abs() < 1e-12);
            }
            if tp + fn_ == tn + fp && tp + fn_ > 0 {
                let bal = (m.tpr.unwrap() + 1.0 - m.fpr.unwrap()) / 2.0;
                prop_assert!((acc - bal).abs() < 1e-12);
            }
        }
    }
}
