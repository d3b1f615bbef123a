//! Brute-force K nearest neighbours in the normalized feature space.

use serde::{Deserialize, Serialize};

use super::Label;
use crate::error::{Error, Result};

/// Neighbour counts tried by default.
pub const DEFAULT_K_VALUES: [usize; 5] = [7, 9, 11, 13, 15];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnModel {
    pub k: usize,
    pub points: Vec<Vec<f64>>,
    pub labels: Vec<Label>,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

impl KnnModel {
    pub fn new(k: usize, points: Vec<Vec<f64>>, labels: Vec<Label>) -> Result<Self> {
        if points.len() != labels.len() {
            return Err(Error::Precondition("points and labels differ in length".into()));
        }
        if k == 0 || k > points.len() {
            return Err(Error::Config(format!(
                "K must be in 1..={}, got {k}",
                points.len()
            )));
        }
        if let Some(d) = points.first().map(Vec::len) {
            if points.iter().any(|p| p.len() != d) {
                return Err(Error::Shape("training points differ in dimension".into()));
            }
        }
        Ok(KnnModel { k, points, labels })
    }

    /// Indices of the `k` nearest training points, ordered by (distance, index).
    pub fn neighbours(&self, query: &[f64]) -> Vec<usize> {
        let mut d: Vec<(f64, usize)> = self
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| (sq_dist(p, query), i))
            .collect();
        let by = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
        if self.k < d.len() {
            d.select_nth_unstable_by(self.k - 1, by);
            d.truncate(self.k);
        }
        d.sort_unstable_by(by);
        d.into_iter().map(|(_, i)| i).collect()
    }

    /// Fraction of positive neighbours.
    pub fn decision_value(&self, query: &[f64]) -> f64 {
        let pos = self
            .neighbours(query)
            .iter()
            .filter(|&&i| self.labels[i].is_positive())
            .count();
        pos as f64 / self.k as f64
    }
}

/// Majority label among the `k` nearest; an even split (even `k` only) is positive.
pub fn classify_knn(model: &KnnModel, query: &[f64]) -> Label {
    if model.decision_value(query) >= 0.5 {
        Label::Positive
    } else {
        Label::Negative
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::{rng_for, Stream};
    use rand::Rng;
    use Label::{Negative as N, Positive as P};

    /// Exhaustive oracle: repeatedly take the unused point with the smallest
    /// (distance, index).
    fn oracle(points: &[Vec<f64>], labels: &[Label], k: usize, q: &[f64]) -> Label {
        let mut used = vec![false; points.len()];
        let mut pos = 0;
        for _ in 0..k {
            let mut best: Option<usize> = None;
            for i in 0..points.len() {
                if used[i] {
                    continue;
                }
                let di: f64 = points[i].iter().zip(q).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
                match best {
                    None => best = Some(i),
                    Some(b) => {
                        let db: f64 = points[b].iter().zip(q).map(|(a, c)| (a - c).powi(2)).sum::<f64>().sqrt();
                        if di < db {
                            best = Some(i);
                        }
                    }
                }
            }
            let b = best.unwrap();
            used[b] = true;
            if labels[b] == P {
                pos += 1;
            }
        }
        if 2 * pos >= k {
            P
        } else {
            N
        }
    }

    #[test]
    fn cluster_of_seven() {
        let mut pts = vec![vec![1.0; 11]; 7];
        let mut labels = vec![P; 7];
        pts.extend(vec![vec![0.0; 11]; 5]);
        labels.extend(vec![N; 5]);
        let m = KnnModel::new(7, pts, labels).unwrap();
        assert_eq!(classify_knn(&m, &[1.0; 11]), P);
    }

    #[test]
    fn four_far_beat_three_near() {
        let mut pts = Vec::new();
        let mut labels = Vec::new();
        for i in 0..3 {
            let mut p = vec![0.0; 11];
            p[i] = 1.0;
            pts.push(p);
            labels.push(N);
        }
        for i in 0..4 {
            let mut p = vec![0.0; 11];
            p[i + 3] = 2.0;
            pts.push(p);
            labels.push(P);
        }
        let mut far = vec![0.0; 11];
        far[0] = 50.0;
        pts.push(far);
        labels.push(N);
        let m = KnnModel::new(7, pts, labels).unwrap();
        assert_eq!(classify_knn(&m, &[0.0; 11]), P);
    }

    #[test]
    fn k_larger_than_training_is_config_error() {
        assert!(matches!(
            KnnModel::new(7, vec![vec![0.0]; 3], vec![P; 3]),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn ties_break_by_index() {
        let m = KnnModel::new(1, vec![vec![1.0], vec![-1.0]], vec![N, P]).unwrap();
        assert_eq!(m.neighbours(&[0.0]), vec![0]);
    }

    #[test]
    fn matches_exhaustive_oracle() {
        let mut rng = rng_for(11, Stream::Fold, 0);
        let pts: Vec<Vec<f64>> = (0..60).map(|_| (0..11).map(|_| rng.random::<f64>()).collect()).collect();
        let labels: Vec<Label> = (0..60).map(|_| if rng.random::<bool>() { P } else { N }).collect();
        for k in DEFAULT_K_VALUES {
            let m = KnnModel::new(k, pts.clone(), labels.clone()).unwrap();
            for _ in 0..100 {
                let q: Vec<f64> = (0..11).map(|_| rng.random::<f64>()).collect();
                assert_eq!(classify_knn(&m, &q), oracle(&pts, &labels, k, &q));
            }
        }
    }

    #[test]
    fn row_permutation_invariant() {
        let mut rng = rng_for(12, Stream::Fold, 0);
        let pts: Vec<Vec<f64>> = (0..40).map(|_| (0..11).map(|_| rng.random::<f64>()).collect()).collect();
        let labels: Vec<Label> = (0..40).map(|i| if i % 3 == 0 { P } else { N }).collect();
        let a = KnnModel::new(9, pts.clone(), labels.clone()).unwrap();
        let mut order: Vec<usize> = (0..40).collect();
        order.reverse();
        let b = KnnModel::new(
            9,
            order.iter().map(|&i| pts[i].clone()).collect(),
            order.iter().map(|&i| labels[i]).collect(),
        )
        .unwrap();
        for _ in 0..200 {
            let q: Vec<f64> = (0..11).map(|_| rng.random::<f64>()).collect();
            assert_eq!(classify_knn(&a, &q), classify_knn(&b, &q));
        }
    }
}
