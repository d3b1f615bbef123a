//! Repeated stratified train/test splits over a labeled feature dataset.

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::metrics::{metrics, ConfusionCounts, MetricSet};
use crate::classify::grid_search::{default_c_grid, default_gamma_grid, grid_search_svm, SearchObjective};
use crate::classify::knn::KnnModel;
use crate::classify::threshold::{classify_threshold, train_threshold, MAX_CONSECUTIVE};
use crate::classify::{classify_knn, classify_svm, Label, LabeledDataset};
use crate::error::{Error, Result};
use crate::features::{fit_normalizer, FeatureVector};
use crate::seed::{rng_for, Stream};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ClassifierSpec {
    /// Magnitude threshold voting over `n_consecutive` measurements.
    Threshold { n_consecutive: usize },
    Knn { k: usize },
    Svm {
        c_grid: Vec<f64>,
        gamma_grid: Vec<f64>,
        #[serde(default)]
        objective: SearchObjective,
    },
    /// Calls everything positive. A sanity baseline.
    ConstantPositive,
}

impl ClassifierSpec {
    pub fn default_svm() -> Self {
        ClassifierSpec::Svm {
            c_grid: default_c_grid(),
            gamma_grid: default_gamma_grid(),
            objective: SearchObjective::default(),
        }
    }

    pub fn name(&self) -> String {
        match self {
            ClassifierSpec::Threshold { n_consecutive } => format!("threshold_n{n_consecutive}"),
            ClassifierSpec::Knn { k } => format!("knn_k{k}"),
            ClassifierSpec::Svm { .. } => "svm_rbf".into(),
            ClassifierSpec::ConstantPositive => "constant_positive".into(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ClassifierSpec::Threshold { n_consecutive } if !(1..=MAX_CONSECUTIVE).contains(n_consecutive) => Err(
                Error::Config(format!("n_consecutive must be in 1..={MAX_CONSECUTIVE}, got {n_consecutive}")),
            ),
            ClassifierSpec::Knn { k } if *k == 0 => Err(Error::Config("K must be at least 1".into())),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McConfig {
    pub iters: usize,
    pub train_frac: f64,
    pub seed: u64,
}

/// Train and test indices of one split.
#[derive(Debug, Clone, PartialEq)]
pub struct Split {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Shuffle each class separately and take the same number of training rows
/// from both, so train and test are each class-balanced.
pub fn stratified_split<R: Rng>(labels: &[Label], train_frac: f64, rng: &mut R) -> Result<Split> {
    if !(train_frac > 0.0 && train_frac < 1.0) {
        return Err(Error::Config(format!("train fraction must be in (0, 1), got {train_frac}")));
    }
    let mut pos: Vec<usize> = (0..labels.len()).filter(|&i| labels[i].is_positive()).collect();
    let mut neg: Vec<usize> = (0..labels.len()).filter(|&i| !labels[i].is_positive()).collect();
    if pos.len() != neg.len() {
        return Err(Error::Precondition(format!(
            "dataset must be class-balanced, got {} positive and {} negative",
            pos.len(),
            neg.len()
        )));
    }
    let n_train = (train_frac * pos.len() as f64).round() as usize;
    if n_train == 0 || n_train >= pos.len() {
        return Err(Error::Precondition(format!(
            "split leaves an empty side with {} rows per class",
            pos.len()
        )));
    }
    pos.shuffle(rng);
    neg.shuffle(rng);
    let mut train: Vec<usize> = pos[..n_train].iter().chain(&neg[..n_train]).copied().collect();
    let mut test: Vec<usize> = pos[n_train..].iter().chain(&neg[n_train..]).copied().collect();
    train.sort_unstable();
    test.sort_unstable();
    Ok(Split { train, test })
}

/// Test-set result of one classifier on one split.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitOutcome {
    pub counts: ConfusionCounts,
    /// Real-valued scores with true labels, for classifiers that have them.
    pub scores: Option<Vec<(f64, Label)>>,
}

/// The `n` test magnitudes voted on for item `i`: the item and the next
/// `n - 1` test items of the same class, wrapping around.
fn consecutive_window(mags: &[f64], labels: &[Label], i: usize, n: usize) -> Vec<f64> {
    let same: Vec<usize> = (0..labels.len()).filter(|&j| labels[j] == labels[i]).collect();
    let at = same.iter().position(|&j| j == i).expect("item is in its own class");
    (0..n).map(|o| mags[same[(at + o) % same.len()]]).collect()
}

/// Fit the normalizer on the training rows, train each classifier, and
/// score the test rows.
pub fn evaluate_split(data: &LabeledDataset, specs: &[ClassifierSpec], split: &Split) -> Result<Vec<SplitOutcome>> {
    let train_fv: Vec<FeatureVector> = split.train.iter().map(|&i| data.rows[i].features).collect();
    let norm = fit_normalizer(&train_fv)?;
    let scaled = |idx: &[usize]| -> Vec<FeatureVector> { idx.iter().map(|&i| norm.apply(&data.rows[i].features)).collect() };
    let (tr, te) = (scaled(&split.train), scaled(&split.test));
    let tr_labels: Vec<Label> = split.train.iter().map(|&i| data.rows[i].label).collect();
    let te_labels: Vec<Label> = split.test.iter().map(|&i| data.rows[i].label).collect();
    let vecs = |f: &[FeatureVector]| -> Vec<Vec<f64>> { f.iter().map(|v| v.to_array().to_vec()).collect() };
    let (tr_x, te_x) = (vecs(&tr), vecs(&te));
    let mag = |f: &[FeatureVector]| -> Vec<f64> { f.iter().map(|v| v.magnitude.expect("normalized")).collect() };
    let (tr_m, te_m) = (mag(&tr), mag(&te));

    let mut out = Vec::with_capacity(specs.len());
    for spec in specs {
        spec.validate()?;
        let outcome = match spec {
            ClassifierSpec::Threshold { n_consecutive } => {
                let model = train_threshold(&tr_m, &tr_labels)?;
                let mut counts = ConfusionCounts::default();
                for i in 0..te_m.len() {
                    let window = consecutive_window(&te_m, &te_labels, i, *n_consecutive);
                    counts.record(te_labels[i], classify_threshold(&model, &window)?);
                }
                SplitOutcome { counts, scores: None }
            }
            ClassifierSpec::Knn { k } => {
                let model = KnnModel::new(*k, tr_x.clone(), tr_labels.clone())?;
                let mut counts = ConfusionCounts::default();
                let mut scores = Vec::with_capacity(te_x.len());
                for (q, &l) in te_x.iter().zip(&te_labels) {
                    counts.record(l, classify_knn(&model, q));
                    scores.push((model.decision_value(q), l));
                }
                SplitOutcome {
                    counts,
                    scores: Some(scores),
                }
            }
            ClassifierSpec::Svm {
                c_grid,
                gamma_grid,
                objective,
            } => {
                let search = grid_search_svm(&tr_x, &tr_labels, c_grid, gamma_grid, *objective)?;
                let mut counts = ConfusionCounts::default();
                let mut scores = Vec::with_capacity(te_x.len());
                for (q, &l) in te_x.iter().zip(&te_labels) {
                    let (pred, f) = classify_svm(&search.model, q);
                    counts.record(l, pred);
                    scores.push((f, l));
                }
                SplitOutcome {
                    counts,
                    scores: Some(scores),
                }
            }
            ClassifierSpec::ConstantPositive => SplitOutcome {
                counts: ConfusionCounts::from_pairs(te_labels.iter().map(|&l| (l, Label::Positive))),
                scores: None,
            },
        };
        out.push(outcome);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MetricSummary {
    pub tpr: f64,
    pub fpr: f64,
    pub acc: f64,
    pub f1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierReport {
    pub name: String,
    pub mean: MetricSummary,
    /// Population standard deviation across iterations.
    pub std: MetricSummary,
    /// Per-iteration `(FPR, TPR)`.
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McReport {
    pub iterations: usize,
    pub seed: u64,
    pub train_frac: f64,
    pub classifiers: Vec<ClassifierReport>,
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / n;
    (m, v.sqrt())
}

fn summarize(name: String, sets: &[MetricSet]) -> Result<ClassifierReport> {
    let pick = |f: fn(&MetricSet) -> Option<f64>, label: &str| -> Result<Vec<f64>> {
        sets.iter()
            .enumerate()
            .map(|(i, m)| {
                f(m).ok_or_else(|| Error::Numeric(format!("{label} undefined in iteration {i} for {name}")))
            })
            .collect()
    };
    let tpr = pick(|m| m.tpr, "TPR")?;
    let fpr = pick(|m| m.fpr, "FPR")?;
    let acc = pick(|m| m.acc, "ACC")?;
    let f1 = pick(|m| m.f1, "F1")?;
    let (a, b, c, d) = (mean_std(&tpr), mean_std(&fpr), mean_std(&acc), mean_std(&f1));
    Ok(ClassifierReport {
        mean: MetricSummary {
            tpr: a.0,
            fpr: b.0,
            acc: c.0,
            f1: d.0,
        },
        std: MetricSummary {
            tpr: a.1,
            fpr: b.1,
            acc: c.1,
            f1: d.1,
        },
        points: fpr.iter().copied().zip(tpr.iter().copied()).collect(),
        name,
    })
}

/// Split for iteration `it`.
pub fn iteration_split(data: &LabeledDataset, cfg: &McConfig, it: usize) -> Result<Split> {
    let mut rng = rng_for(cfg.seed, Stream::MonteCarlo, it as u64);
    stratified_split(&data.labels(), cfg.train_frac, &mut rng)
}

/// Iterations run in parallel, each from its own derived seed; aggregation
/// is in iteration order, so the report does not depend on thread count.
pub fn monte_carlo(data: &LabeledDataset, specs: &[ClassifierSpec], cfg: &McConfig) -> Result<McReport> {
    if cfg.iters == 0 {
        return Err(Error::Config("iteration count must be at least 1".into()));
    }
    if specs.is_empty() {
        return Err(Error::Config("no classifiers configured".into()));
    }
    data.require_both_classes()?;
    let per_iter: Vec<Result<Vec<MetricSet>>> = (0..cfg.iters)
        .into_par_iter()
        .map(|it| {
            let split = iteration_split(data, cfg, it)?;
            let outcomes = evaluate_split(data, specs, &split)?;
            outcomes.iter().map(|o| metrics(&o.counts)).collect()
        })
        .collect();
    let mut table: Vec<Vec<MetricSet>> = vec![Vec::with_capacity(cfg.iters); specs.len()];
    for (it, r) in per_iter.into_iter().enumerate() {
        let sets = r.map_err(|e| Error::Precondition(format!("Monte-Carlo iteration {it} failed: {e}")))?;
        for (col, m) in table.iter_mut().zip(sets) {
            col.push(m);
        }
    }
    let classifiers = specs
        .iter()
        .zip(&table)
        .map(|(s, sets)| summarize(s.name(), sets))
        .collect::<Result<Vec<_>>>()?;
    Ok(McReport {
        iterations: cfg.iters,
        seed: cfg.seed,
        train_frac: cfg.train_frac,
        classifiers,
    })
}
