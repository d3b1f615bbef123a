//! Gaussian sigma ellipses around a cloud of (FPR, TPR) operating points.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ellipse {
    /// Multiple of the standard deviation.
    pub n_sigma: u32,
    pub semi_major: f64,
    pub semi_minor: f64,
    /// Angle of the major axis from the FPR axis, radians.
    pub angle: f64,
}

impl Ellipse {
    /// `n` points on the outline around `center`.
    pub fn outline(&self, center: (f64, f64), n: usize) -> Vec<(f64, f64)> {
        let (s, c) = self.angle.sin_cos();
        (0..n)
            .map(|i| {
                let t = std::f64::consts::TAU * i as f64 / n as f64;
                let (a, b) = (self.semi_major * t.cos(), self.semi_minor * t.sin());
                (center.0 + a * c - b * s, center.1 + a * s + b * c)
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigmaContours {
    pub mean: (f64, f64),
    /// Population covariance `[[xx, xy], [xy, yy]]`.
    pub covariance: [[f64; 2]; 2],
    /// Eigenvalues, largest first.
    pub eigenvalues: [f64; 2],
    pub ellipses: Vec<Ellipse>,
    /// Set when the covariance is singular and the contours collapse to a
    /// line or a point.
    pub degenerate: bool,
}

pub fn sigma_contours(points: &[(f64, f64)]) -> Result<SigmaContours> {
    if points.len() < 2 {
        return Err(Error::Precondition(format!(
            "contours need at least 2 points, got {}",
            points.len()
        )));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for p in points {
        let (dx, dy) = (p.0 - mx, p.1 - my);
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    let (sxx, syy, sxy) = (sxx / n, syy / n, sxy / n);

    // closed-form symmetric 2x2 eigensystem
    let tr = sxx + syy;
    let diff = 0.5 * (sxx - syy);
    let root = (diff * diff + sxy * sxy).sqrt();
    let l1 = 0.5 * tr + root;
    let l2 = (0.5 * tr - root).max(0.0);
    let angle = if root == 0.0 { 0.0 } else { 0.5 * (2.0 * sxy).atan2(sxx - syy) };
    let scale = l1.max(f64::MIN_POSITIVE);
    let degenerate = l2 <= 1e-12 * scale;

    let ellipses = (1..=3)
        .map(|k| Ellipse {
            n_sigma: k,
            semi_major: k as f64 * l1.sqrt(),
            semi_minor: k as f64 * l2.sqrt(),
            angle,
        })
        .collect();
    Ok(SigmaContours {
        mean: (mx, my),
        covariance: [[sxx, sxy], [sxy, syy]],
        eigenvalues: [l1, l2],
        ellipses,
        degenerate,
    })
}
