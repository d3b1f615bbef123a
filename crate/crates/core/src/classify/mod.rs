//! Binary classifiers over feature vectors: a magnitude threshold with
//! consecutive-measurement voting, K nearest neighbours and an RBF support
//! vector machine.

pub mod grid_search;
pub mod knn;
pub mod svm;
pub mod threshold;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::FeatureVector;

pub use grid_search::{grid_search_svm, GridSearchResult, SearchObjective};
pub use knn::{classify_knn, KnnModel};
pub use svm::{classify_svm, train_svm_rbf, SvmRbfModel, TrainingFailure};
pub use threshold::{classify_threshold, train_threshold, Polarity, ThresholdModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    /// Concealed object present.
    Positive,
    Negative,
}

impl Label {
    pub fn sign(self) -> f64 {
        match self {
            Label::Positive => 1.0,
            Label::Negative => -1.0,
        }
    }

    pub fn is_positive(self) -> bool {
        self == Label::Positive
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Positive => "positive",
            Label::Negative => "negative",
        }
    }

    pub fn parse(s: &str) -> Option<Label> {
        match s {
            "positive" => Some(Label::Positive),
            "negative" => Some(Label::Negative),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledRow {
    pub features: FeatureVector,
    pub label: Label,
    pub source_id: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct LabeledDataset {
    pub rows: Vec<LabeledRow>,
}

impl LabeledDataset {
    pub fn new(rows: Vec<LabeledRow>) -> Self {
        LabeledDataset { rows }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// `(positives, negatives)`.
    pub fn class_counts(&self) -> (usize, usize) {
        let p = self.rows.iter().filter(|r| r.label.is_positive()).count();
        (p, self.rows.len() - p)
    }

    pub fn labels(&self) -> Vec<Label> {
        self.rows.iter().map(|r| r.label).collect()
    }

    pub fn require_both_classes(&self) -> Result<()> {
        require_both_classes(&self.labels())
    }

    pub fn subset(&self, idx: &[usize]) -> LabeledDataset {
        LabeledDataset {
            rows: idx.iter().map(|&i| self.rows[i].clone()).collect(),
        }
    }
}

pub(crate) fn require_both_classes(labels: &[Label]) -> Result<()> {
    let p = labels.iter().filter(|l| l.is_positive()).count();
    if p == 0 || p == labels.len() {
        return Err(Error::Precondition(format!(
            "training needs both classes, got {p} positive and {} negative",
            labels.len() - p
        )));
    }
    Ok(())
}
