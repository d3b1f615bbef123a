//! ROC curves from real-valued decision scores.

use serde::{Deserialize, Serialize};

use crate::classify::Label;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RocPoint {
    pub fpr: f64,
    pub tpr: f64,
    /// Scores at or above this value are called positive.
    pub threshold: f64,
}

/// Sweep the threshold down through the sorted unique scores. The curve
/// starts at (0, 0) and ends at (1, 1). Classes missing from the input give
/// a rate of 0 on that axis.
pub fn roc_sweep(scored: &[(f64, Label)]) -> Vec<RocPoint> {
    let p = scored.iter().filter(|s| s.1.is_positive()).count() as f64;
    let n = scored.len() as f64 - p;
    let rate = |k: usize, total: f64| if total > 0.0 { k as f64 / total } else { 0.0 };
    let mut order: Vec<&(f64, Label)> = scored.iter().collect();
    order.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut out = vec![RocPoint {
        fpr: 0.0,
        tpr: 0.0,
        threshold: f64::INFINITY,
    }];
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut i = 0;
    while i < order.len() {
        let t = order[i].0;
        while i < order.len() && order[i].0 == t {
            if order[i].1.is_positive() {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        out.push(RocPoint {
            fpr: rate(fp, n),
            tpr: rate(tp, p),
            threshold: t,
        });
    }
    out
}

/// Trapezoidal area under a swept curve.
pub fn auc(curve: &[RocPoint]) -> f64 {
    curve
        .windows(2)
        .map(|w| (w[1].fpr - w[0].fpr) * 0.5 * (w[1].tpr + w[0].tpr))
        .sum()
}
