//! Soft-margin SVM with an RBF kernel, trained by sequential minimal
//! optimization on the dual
//!
//! ```text
//! min  1/2 a'Qa - sum(a)   s.t.  y'a = 0,  0 <= a_i <= C,   Q_ij = y_i y_j k(x_i, x_j)
//! ```
//!
//! Each step updates the maximal violating pair: the index in the "up" set
//! with the largest `-y G` and the index in the "low" set with the smallest,
//! where `G = Qa - 1` is the gradient. Training stops when the gap between
//! the two is at most the tolerance.

use serde::{Deserialize, Serialize};

use super::{require_both_classes, Label};
use crate::error::{Error, Result};

pub const KKT_TOLERANCE: f64 = 1e-3;
pub const MAX_ITERATIONS: usize = 100_000;
const TAU: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmRbfModel {
    pub support_vectors: Vec<Vec<f64>>,
    /// `alpha_i * y_i` per support vector.
    pub dual_coef: Vec<f64>,
    pub bias: f64,
    pub gamma_rbf: f64,
    pub c: f64,
}

/// SMO ran out of iterations. Carries the state reached so far.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("SMO did not converge after {iterations} iterations (violation gap {gap:.3e}, dual objective {dual_objective:.6e})")]
pub struct TrainingFailure {
    pub iterations: usize,
    pub gap: f64,
    pub dual_objective: f64,
    pub best_so_far: Box<SvmRbfModel>,
}

pub fn rbf(a: &[f64], b: &[f64], gamma: f64) -> f64 {
    let d: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    (-gamma * d).exp()
}

/// Row-major kernel matrix of `x`.
pub fn kernel_matrix(x: &[Vec<f64>], gamma: f64) -> Vec<f64> {
    let n = x.len();
    let mut k = vec![0.0; n * n];
    for i in 0..n {
        k[i * n + i] = 1.0;
        for j in 0..i {
            let v = rbf(&x[i], &x[j], gamma);
            k[i * n + j] = v;
            k[j * n + i] = v;
        }
    }
    k
}

/// Raw dual solution, before support vectors are extracted.
#[derive(Debug, Clone)]
pub struct DualSolution {
    pub alpha: Vec<f64>,
    pub bias: f64,
    pub iterations: usize,
    pub gap: f64,
    pub dual_objective: f64,
    pub converged: bool,
}

/// SMO on a precomputed kernel matrix. `y` holds +1/-1.
pub fn solve_dual(kmat: &[f64], y: &[f64], c: f64) -> DualSolution {
    let n = y.len();
    let mut alpha = vec![0.0; n];
    let mut grad = vec![-1.0; n];
    let is_up = |a: f64, yi: f64| (yi > 0.0 && a < c) || (yi < 0.0 && a > 0.0);
    let is_low = |a: f64, yi: f64| (yi > 0.0 && a > 0.0) || (yi < 0.0 && a < c);
    let mut iterations = 0;
    let mut gap;
    loop {
        let mut gmax = f64::NEG_INFINITY;
        let mut gmin = f64::INFINITY;
        let (mut i, mut j) = (usize::MAX, usize::MAX);
        for t in 0..n {
            let v = -y[t] * grad[t];
            if is_up(alpha[t], y[t]) && v > gmax {
                gmax = v;
                i = t;
            }
            if is_low(alpha[t], y[t]) && v < gmin {
                gmin = v;
                j = t;
            }
        }
        gap = gmax - gmin;
        if i == usize::MAX || j == usize::MAX || gap <= KKT_TOLERANCE || iterations >= MAX_ITERATIONS {
            break;
        }
        iterations += 1;

        let (ki, kj) = (&kmat[i * n..(i + 1) * n], &kmat[j * n..(j + 1) * n]);
        let (ai_old, aj_old) = (alpha[i], alpha[j]);
        let qij = y[i] * y[j] * ki[j];
        if y[i] != y[j] {
            let quad = (ki[i] + kj[j] + 2.0 * qij).max(TAU);
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if diff > 0.0 {
                if alpha[j] < 0.0 {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if diff > 0.0 {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if alpha[j] > c {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            let quad = (ki[i] + kj[j] - 2.0 * qij).max(TAU);
            let delta = (grad[i] - grad[j]) / quad;
            let sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if sum > c {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if alpha[j] < 0.0 {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if sum > c {
                if alpha[j] > c {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }
        let (di, dj) = (alpha[i] - ai_old, alpha[j] - aj_old);
        for t in 0..n {
            grad[t] += y[t] * (y[i] * ki[t] * di + y[j] * kj[t] * dj);
        }
    }

    // bias from free vectors, or the midpoint of the feasible interval
    let (mut ub, mut lb) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut sum_free, mut n_free) = (0.0, 0usize);
    for t in 0..n {
        let yg = y[t] * grad[t];
        let at_upper = alpha[t] >= c;
        let at_lower = alpha[t] <= 0.0;
        if at_upper {
            if y[t] < 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else if at_lower {
            if y[t] > 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else {
            n_free += 1;
            sum_free += yg;
        }
    }
    let rho = if n_free > 0 { sum_free / n_free as f64 } else { 0.5 * (ub + lb) };
    let dual_objective = 0.5 * alpha.iter().zip(&grad).map(|(a, g)| a * (g - 1.0)).sum::<f64>();
    DualSolution {
        converged: gap <= KKT_TOLERANCE,
        alpha,
        bias: -rho,
        iterations,
        gap,
        dual_objective,
    }
}

fn check_inputs(x: &[Vec<f64>], labels: &[Label], c: f64, gamma: f64) -> Result<()> {
    if x.len() != labels.len() {
        return Err(Error::Precondition("points and labels differ in length".into()));
    }
    require_both_classes(labels)?;
    if !(c > 0.0 && c.is_finite() && gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::Config(format!("C and gamma must be positive, got C={c} gamma={gamma}")));
    }
    let d = x[0].len();
    if x.iter().any(|p| p.len() != d) {
        return Err(Error::Shape("training points differ in dimension".into()));
    }
    if x.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::Numeric("non-finite training feature".into()));
    }
    Ok(())
}

/// Train on a precomputed kernel matrix of `x`.
pub fn train_with_kernel(x: &[Vec<f64>], labels: &[Label], kmat: &[f64], c: f64, gamma: f64) -> Result<SvmRbfModel> {
    check_inputs(x, labels, c, gamma)?;
    let y: Vec<f64> = labels.iter().map(|l| l.sign()).collect();
    let sol = solve_dual(kmat, &y, c);
    let mut model = SvmRbfModel {
        support_vectors: Vec::new(),
        dual_coef: Vec::new(),
        bias: sol.bias,
        gamma_rbf: gamma,
        c,
    };
    for (i, &a) in sol.alpha.iter().enumerate() {
        if a > 0.0 {
            model.support_vectors.push(x[i].clone());
            model.dual_coef.push(a * y[i]);
        }
    }
    if sol.gap > KKT_TOLERANCE {
        return Err(TrainingFailure {
            iterations: sol.iterations,
            gap: sol.gap,
            dual_objective: sol.dual_objective,
            best_so_far: Box::new(model),
        }
        .into());
    }
    if model.support_vectors.is_empty() {
        return Err(Error::Numeric("training produced no support vectors".into()));
    }
    Ok(model)
}

pub fn train_svm_rbf(x: &[Vec<f64>], labels: &[Label], c: f64, gamma: f64) -> Result<SvmRbfModel> {
    check_inputs(x, labels, c, gamma)?;
    let kmat = kernel_matrix(x, gamma);
    train_with_kernel(x, labels, &kmat, c, gamma)
}

impl SvmRbfModel {
    pub fn decision_value(&self, query: &[f64]) -> f64 {
        self.support_vectors
            .iter()
            .zip(&self.dual_coef)
            .map(|(sv, a)| a * rbf(sv, query, self.gamma_rbf))
            .sum::<f64>()
            + self.bias
    }
}

/// Label by the sign of the decision value (zero counts as positive), with
/// the value itself for ROC sweeps.
pub fn classify_svm(model: &SvmRbfModel, query: &[f64]) -> (Label, f64) {
    let f = model.decision_value(query);
    (if f >= 0.0 { Label::Positive } else { Label::Negative }, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::{rng_for, Stream};
    use rand::Rng;
    use Label::{Negative as N, Positive as P};

    fn accuracy(m: &SvmRbfModel, x: &[Vec<f64>], l: &[Label]) -> f64 {
        x.iter().zip(l).filter(|(p, &lab)| classify_svm(m, p).0 == lab).count() as f64 / x.len() as f64
    }

    fn check_invariants(x: &[Vec<f64>], labels: &[Label], m: &SvmRbfModel) {
        let sum: f64 = m.dual_coef.iter().sum();
        assert!(sum.abs() <= 1e-6, "sum alpha y = {sum}");
        for a in &m.dual_coef {
            assert!(a.abs() > 0.0 && a.abs() <= m.c + 1e-12);
        }
        for (p, l) in x.iter().zip(labels) {
            if let Some(idx) = m.support_vectors.iter().position(|s| s == p) {
                let a = m.dual_coef[idx].abs();
                if a < m.c - 1e-9 {
                    let margin = l.sign() * m.decision_value(p);
                    assert!((margin - 1.0).abs() <= 1e-2, "free SV margin {margin}");
                }
            }
        }
    }

    #[test]
    fn two_point_analytic() {
        let x = vec![vec![0.0, 0.0], vec![1.0, 0.0]];
        let l = vec![N, P];
        let m = train_svm_rbf(&x, &l, 10.0, 1.0).unwrap();
        assert_eq!(m.support_vectors.len(), 2);
        assert_eq!(accuracy(&m, &x, &l), 1.0);
        // analytic: alpha = 2 / (2 - 2 k12), b = 0, decision values +/-1
        let k12 = (-1.0f64).exp();
        let alpha = 1.0 / (1.0 - k12);
        assert!((m.dual_coef[0].abs() - alpha).abs() < 1e-3 * alpha);
        let (f0, f1) = (m.decision_value(&x[0]), m.decision_value(&x[1]));
        assert!((f0 + f1).abs() < 1e-6);
        assert!(m.decision_value(&[0.5, 0.0]).abs() < 1e-6);
        check_invariants(&x, &l, &m);
    }

    #[test]
    fn xor_separates() {
        let x = vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0], vec![1.0, 0.0]];
        let l = vec![N, N, P, P];
        let m = train_svm_rbf(&x, &l, 10.0, 1.0).unwrap();
        assert_eq!(accuracy(&m, &x, &l), 1.0);
        check_invariants(&x, &l, &m);
    }

    #[test]
    fn conflicting_duplicates_do_not_crash() {
        let x = vec![vec![0.5], vec![0.5], vec![0.0], vec![1.0]];
        let l = vec![P, N, N, P];
        let m = train_svm_rbf(&x, &l, 1.0, 1.0).unwrap();
        assert!(accuracy(&m, &x, &l) < 1.0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(train_svm_rbf(&[vec![0.0], vec![1.0]], &[P, P], 1.0, 1.0).is_err());
        assert!(train_svm_rbf(&[vec![0.0], vec![1.0]], &[P, N], 0.0, 1.0).is_err());
    }

    #[test]
    fn storage_order_does_not_change_labels() {
        let x = vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0], vec![1.0, 0.0], vec![0.4, 0.6]];
        let l = vec![N, N, P, P, P];
        let m = train_svm_rbf(&x, &l, 5.0, 2.0).unwrap();
        let mut r = m.clone();
        r.support_vectors.reverse();
        r.dual_coef.reverse();
        let mut rng = rng_for(3, Stream::Fold, 0);
        for _ in 0..100 {
            let q = vec![rng.random::<f64>(), rng.random::<f64>()];
            assert_eq!(classify_svm(&m, &q).0, classify_svm(&r, &q).0);
        }
    }

    #[test]
    fn random_problems_satisfy_kkt() {
        let mut rng = rng_for(5, Stream::Fold, 1);
        for trial in 0..20 {
            let n = 30;
            let x: Vec<Vec<f64>> = (0..n).map(|_| (0..3).map(|_| rng.random::<f64>()).collect()).collect();
            let l: Vec<Label> = (0..n).map(|i| if (x[i][0] + 0.3 * rng.random::<f64>()) > 0.6 { P } else { N }).collect();
            if l.iter().all(|v| *v == l[0]) {
                continue;
            }
            let c = [0.1, 1.0, 10.0, 100.0][trial % 4];
            let m = train_svm_rbf(&x, &l, c, 3.0).unwrap();
            check_invariants(&x, &l, &m);
        }
    }
}
