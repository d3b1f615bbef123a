//! Logarithmic `(C, gamma)` grid search for the RBF SVM.

use serde::{Deserialize, Serialize};

use super::svm::{kernel_matrix, solve_dual, train_with_kernel, SvmRbfModel};
use super::{require_both_classes, Label};
use crate::error::{Error, Result};

pub fn default_c_grid() -> Vec<f64> {
    (-2..=3).map(|e| 10f64.powi(e)).collect()
}

pub fn default_gamma_grid() -> Vec<f64> {
    (-3..=2).map(|e| 10f64.powi(e)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum SearchObjective {
    /// Mean accuracy over stratified folds of the training set.
    CrossValidation { folds: usize },
    /// Accuracy on the training set itself.
    TrainingAccuracy,
}

impl Default for SearchObjective {
    fn default() -> Self {
        SearchObjective::CrossValidation { folds: 3 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellScore {
    pub c: f64,
    pub gamma: f64,
    /// `None` when training failed for this cell.
    pub accuracy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSearchResult {
    pub c: f64,
    pub gamma: f64,
    pub accuracy: f64,
    pub model: SvmRbfModel,
    pub cells: Vec<CellScore>,
}

fn check_log_grid(name: &str, g: &[f64]) -> Result<()> {
    if g.is_empty() {
        return Err(Error::Config(format!("{name} grid is empty")));
    }
    if g.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(Error::Config(format!("{name} grid values must be positive")));
    }
    if g.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config(format!("{name} grid must be increasing")));
    }
    if g.len() > 2 {
        let r0 = (g[1] / g[0]).ln();
        if g.windows(2).any(|w| ((w[1] / w[0]).ln() - r0).abs() > 1e-6 * r0.abs()) {
            return Err(Error::Config(format!("{name} grid is not logarithmically spaced")));
        }
    }
    Ok(())
}

/// Round-robin fold assignment within each class, in dataset order.
pub fn stratified_folds(labels: &[Label], folds: usize) -> Vec<usize> {
    let (mut p, mut n) = (0usize, 0usize);
    labels
        .iter()
        .map(|l| {
            let c = if l.is_positive() { &mut p } else { &mut n };
            let f = *c % folds;
            *c += 1;
            f
        })
        .collect()
}

fn sub_kernel(kmat: &[f64], n: usize, idx: &[usize]) -> Vec<f64> {
    let mut out = Vec::with_capacity(idx.len() * idx.len());
    for &i in idx {
        for &j in idx {
            out.push(kmat[i * n + j]);
        }
    }
    out
}

/// Accuracy of one `(C, gamma)` cell; `None` if any fold fails to train.
fn cell_accuracy(kmat: &[f64], y: &[f64], c: f64, objective: SearchObjective, folds_of: &[usize]) -> Option<f64> {
    let n = y.len();
    match objective {
        SearchObjective::TrainingAccuracy => {
            let sol = solve_dual(kmat, y, c);
            if !sol.converged {
                return None;
            }
            let correct = (0..n)
                .filter(|&t| {
                    let f: f64 = (0..n).map(|i| sol.alpha[i] * y[i] * kmat[t * n + i]).sum::<f64>() + sol.bias;
                    (f >= 0.0) == (y[t] > 0.0)
                })
                .count();
            Some(correct as f64 / n as f64)
        }
        SearchObjective::CrossValidation { folds } => {
            let mut total = 0.0;
            for f in 0..folds {
                let train: Vec<usize> = (0..n).filter(|&i| folds_of[i] != f).collect();
                let test: Vec<usize> = (0..n).filter(|&i| folds_of[i] == f).collect();
                let ty: Vec<f64> = train.iter().map(|&i| y[i]).collect();
                if test.is_empty() || ty.iter().all(|v| *v == ty[0]) {
                    return None;
                }
                let sol = solve_dual(&sub_kernel(kmat, n, &train), &ty, c);
                if !sol.converged {
                    return None;
                }
                let correct = test
                    .iter()
                    .filter(|&&t| {
                        let f: f64 = train
                            .iter()
                            .enumerate()
                            .map(|(a, &i)| sol.alpha[a] * ty[a] * kmat[t * n + i])
                            .sum::<f64>()
                            + sol.bias;
                        (f >= 0.0) == (y[t] > 0.0)
                    })
                    .count();
                total += correct as f64 / test.len() as f64;
            }
            Some(total / folds as f64)
        }
    }
}

/// Evaluate every cell, pick the best (ties: smaller C, then smaller gamma)
/// and retrain on the full training set. Cells that fail to train are
/// skipped with a warning.
pub fn grid_search_svm(
    x: &[Vec<f64>],
    labels: &[Label],
    c_grid: &[f64],
    gamma_grid: &[f64],
    objective: SearchObjective,
) -> Result<GridSearchResult> {
    check_log_grid("C", c_grid)?;
    check_log_grid("gamma", gamma_grid)?;
    require_both_classes(labels)?;
    if x.len() != labels.len() {
        return Err(Error::Precondition("points and labels differ in length".into()));
    }
    if let SearchObjective::CrossValidation { folds } = objective {
        if folds < 2 {
            return Err(Error::Config(format!("need at least 2 folds, got {folds}")));
        }
    }
    let folds_of = match objective {
        SearchObjective::CrossValidation { folds } => stratified_folds(labels, folds),
        SearchObjective::TrainingAccuracy => vec![0; labels.len()],
    };
    let y: Vec<f64> = labels.iter().map(|l| l.sign()).collect();

    let mut kernels = Vec::with_capacity(gamma_grid.len());
    for &g in gamma_grid {
        kernels.push(kernel_matrix(x, g));
    }
    let mut cells = Vec::with_capacity(c_grid.len() * gamma_grid.len());
    let mut best: Option<(usize, usize, f64)> = None;
    for (ci, &c) in c_grid.iter().enumerate() {
        for (gi, &g) in gamma_grid.iter().enumerate() {
            let acc = cell_accuracy(&kernels[gi], &y, c, objective, &folds_of);
            match acc {
                None => log::warn!("grid cell C={c:e} gamma={g:e} failed to train, skipped"),
                Some(a) => {
                    if best.is_none_or(|b| a > b.2) {
                        best = Some((ci, gi, a));
                    }
                }
            }
            cells.push(CellScore {
                c,
                gamma: g,
                accuracy: acc,
            });
        }
    }
    let (ci, gi, accuracy) =
        best.ok_or_else(|| Error::Precondition("no grid cell could be trained".into()))?;
    let (c, gamma) = (c_grid[ci], gamma_grid[gi]);
    let model = train_with_kernel(x, labels, &kernels[gi], c, gamma)?;
    Ok(GridSearchResult {
        c,
        gamma,
        accuracy,
        model,
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use Label::{Negative as N, Positive as P};

    fn blobs() -> (Vec<Vec<f64>>, Vec<Label>) {
        let mut x = Vec::new();
        let mut l = Vec::new();
        for i in 0..12 {
            let t = i as f64 * 0.05;
            x.push(vec![t, 0.1 * t]);
            l.push(N);
            x.push(vec![2.0 + t, 0.1 * t]);
            l.push(P);
        }
        (x, l)
    }

    #[test]
    fn default_grid_has_36_cells() {
        let (x, l) = blobs();
        let r = grid_search_svm(&x, &l, &default_c_grid(), &default_gamma_grid(), SearchObjective::default()).unwrap();
        assert_eq!(r.cells.len(), 36);
        assert_eq!(r.accuracy, 1.0);
    }

    #[test]
    fn single_cell() {
        let (x, l) = blobs();
        let r = grid_search_svm(&x, &l, &[3.0], &[0.5], SearchObjective::default()).unwrap();
        assert_eq!((r.c, r.gamma), (3.0, 0.5));
    }

    #[test]
    fn separating_cell_beats_underfit_cell() {
        // XOR-like layout: a near-zero gamma makes every kernel entry ~1
        let mut x = Vec::new();
        let mut l = Vec::new();
        for i in 0..6 {
            let e = i as f64 * 0.01;
            x.extend([vec![e, e], vec![1.0 + e, 1.0 + e], vec![e, 1.0 + e], vec![1.0 + e, e]]);
            l.extend([N, N, P, P]);
        }
        let r = grid_search_svm(&x, &l, &[1.0], &[1e-12, 1.0], SearchObjective::default()).unwrap();
        let under = r.cells[0].accuracy.unwrap();
        let sep = r.cells[1].accuracy.unwrap();
        assert!(sep > under, "{sep} vs {under}");
        assert_eq!(r.gamma, 1.0);
    }

    #[test]
    fn ties_pick_smallest_c_then_gamma() {
        let (x, l) = blobs();
        let r = grid_search_svm(&x, &l, &[1.0, 10.0], &[0.1, 1.0], SearchObjective::TrainingAccuracy).unwrap();
        assert!(r.cells.iter().all(|c| c.accuracy == Some(1.0)));
        assert_eq!((r.c, r.gamma), (1.0, 0.1));
    }

    #[test]
    fn rejects_non_log_grid() {
        let (x, l) = blobs();
        assert!(grid_search_svm(&x, &l, &[1.0, 2.0, 3.5], &[1.0], SearchObjective::default()).is_err());
        assert!(grid_search_svm(&x, &l, &[], &[1.0], SearchObjective::default()).is_err());
    }

    #[test]
    fn folds_are_stratified() {
        let l = [P, N, P, N, P, N, P, P, N];
        let f = stratified_folds(&l, 3);
        assert_eq!(f, vec![0, 0, 1, 1, 2, 2, 0, 1, 0]);
    }
}
