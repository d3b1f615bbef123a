//! Static and rotating interferometric arrays.
//!
//! A static array samples one `(u, v)` point per antenna pair. Rotating a
//! two-element pair about its centroid traces a ring of radius `D` (the
//! baseline in wavelengths) in the `uv`-plane; sample `k` sits at encoder
//! angle `gamma_k = gamma0 + k * step` with
//!
//! ```text
//! u_k = D sin(gamma_k),   v_k = D cos(gamma_k)
//! ```
//!
//! Half a turn suffices: the other half of the ring is the conjugate of the
//! first for any real scene.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::visibility::VisibilityGrid;

/// `(u, v)` points closer than this (in wavelengths) are the same sample.
pub const REDUNDANCY_TOLERANCE: f64 = 1e-9;

/// Relative tolerance of the on-circle invariant.
pub const RING_RADIUS_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct ArrayLayout {
    positions: Vec<(f64, f64)>,
    wavelength: f64,
}

impl ArrayLayout {
    pub fn new(positions: Vec<(f64, f64)>, wavelength: f64) -> Result<Self> {
        if positions.len() < 2 {
            return Err(Error::Precondition(format!(
                "array needs at least 2 antennas, got {}",
                positions.len()
            )));
        }
        if !(wavelength > 0.0 && wavelength.is_finite()) {
            return Err(Error::Domain(format!("wavelength must be positive, got {wavelength}")));
        }
        for (i, p) in positions.iter().enumerate() {
            if !(p.0.is_finite() && p.1.is_finite()) {
                return Err(Error::Domain(format!("antenna {i} has a non-finite position")));
            }
            if positions[..i].contains(p) {
                return Err(Error::Domain(format!("antenna {i} duplicates an earlier position")));
            }
        }
        Ok(ArrayLayout {
            positions,
            wavelength,
        })
    }

    pub fn positions(&self) -> &[(f64, f64)] {
        &self.positions
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }
}

/// One antenna pair's sample, `i < j` by label.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairSample {
    pub i: usize,
    pub j: usize,
    pub u: f64,
    pub v: f64,
    pub redundant: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StaticSampling {
    pub pairs: Vec<PairSample>,
    pub unique: usize,
    pub redundant: usize,
}

impl StaticSampling {
    pub fn total(&self) -> usize {
        self.pairs.len()
    }
}

/// Sampled `(u, v)` points of a static array with the unique/redundant split.
///
/// Pairs are visited in label order; a pair whose point matches an earlier
/// pair's point is redundant. Only one side of the plane is counted.
pub fn static_samples(layout: &ArrayLayout) -> StaticSampling {
    let n = layout.positions.len();
    let mut pairs: Vec<PairSample> = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (layout.positions[i], layout.positions[j]);
            let u = (b.0 - a.0) / layout.wavelength;
            let v = (b.1 - a.1) / layout.wavelength;
            let redundant = pairs.iter().any(|p| {
                (p.u - u).abs() <= REDUNDANCY_TOLERANCE && (p.v - v).abs() <= REDUNDANCY_TOLERANCE
            });
            pairs.push(PairSample { i, j, u, v, redundant });
        }
    }
    let redundant = pairs.iter().filter(|p| p.redundant).count();
    StaticSampling {
        unique: pairs.len() - redundant,
        redundant,
        pairs,
    }
}

/// Rotating-array sampling configuration. Angles in radians, dwell in
/// seconds, rotation rate in revolutions per second.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RingConfig {
    /// One ring per electrical baseline, in wavelengths.
    pub baselines_lambda: Vec<f64>,
    pub gamma0: f64,
    pub step: f64,
    pub span: f64,
    pub dwell: f64,
    pub rotation_rate: f64,
}

impl Default for RingConfig {
    /// 77-wavelength ring, 0.9 degree encoder steps over half a turn, 1 ms dwell.
    fn default() -> Self {
        RingConfig {
            baselines_lambda: vec![77.0],
            gamma0: 0.0,
            step: 0.9_f64.to_radians(),
            span: std::f64::consts::PI,
            dwell: 1e-3,
            rotation_rate: 2.5,
        }
    }
}

impl RingConfig {
    pub fn validate(&self) -> Result<()> {
        if self.baselines_lambda.is_empty() {
            return Err(Error::Config("at least one ring baseline is required".into()));
        }
        if let Some(b) = self.baselines_lambda.iter().find(|b| !(**b > 0.0 && b.is_finite())) {
            return Err(Error::Config(format!("ring baselines must be positive, got {b}")));
        }
        if !(self.step > 0.0 && self.step <= self.span) {
            return Err(Error::Config(format!(
                "angular step must satisfy 0 < step <= span, got step {} span {}",
                self.step, self.span
            )));
        }
        if self.span > std::f64::consts::PI + 1e-12 {
            return Err(Error::Config(format!("span must not exceed pi, got {}", self.span)));
        }
        if !self.gamma0.is_finite() {
            return Err(Error::Config("gamma0 must be finite".into()));
        }
        if self.samples_per_ring() < 1 {
            return Err(Error::Config("ring has no samples".into()));
        }
        Ok(())
    }

    /// `K = round(span / step)`.
    pub fn samples_per_ring(&self) -> usize {
        (self.span / self.step).round() as usize
    }

    pub fn gamma(&self, k: usize) -> f64 {
        self.gamma0 + k as f64 * self.step
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RingSample {
    pub k: usize,
    /// Encoder angle, radians.
    pub gamma: f64,
    pub u: f64,
    pub v: f64,
    pub value: Complex64,
    /// Ring radius in wavelengths.
    pub baseline: f64,
}

/// Ordered visibility samples along one or more rings.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RingSampleSet {
    entries: Vec<RingSample>,
}

fn same_ring(a: f64, b: f64) -> bool {
    (a - b).abs() <= RING_RADIUS_TOLERANCE * a.abs().max(b.abs())
}

impl RingSampleSet {
    /// Validates the on-circle invariant and per-ring ordering of `k`.
    pub fn from_entries(entries: Vec<RingSample>) -> Result<Self> {
        let mut prev: Option<&RingSample> = None;
        for s in &entries {
            let r = (s.u * s.u + s.v * s.v).sqrt();
            if !(s.baseline > 0.0) || (r - s.baseline).abs() > RING_RADIUS_TOLERANCE * s.baseline {
                return Err(Error::Precondition(format!(
                    "sample k={} at radius {r} does not lie on its ring of radius {}",
                    s.k, s.baseline
                )));
            }
            if !(s.value.re.is_finite() && s.value.im.is_finite() && s.gamma.is_finite()) {
                return Err(Error::Numeric(format!("sample k={} is not finite", s.k)));
            }
            if let Some(p) = prev {
                if same_ring(p.baseline, s.baseline) && s.k <= p.k {
                    return Err(Error::Precondition(format!(
                        "sample index k={} does not increase after k={}",
                        s.k, p.k
                    )));
                }
            }
            prev = Some(s);
        }
        Ok(RingSampleSet { entries })
    }

    pub fn entries(&self) -> &[RingSample] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn values(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.entries.iter().map(|e| e.value)
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.value.norm()).collect()
    }

    /// Replace sample values, keeping geometry.
    pub fn with_values(&self, values: impl IntoIterator<Item = Complex64>) -> Result<Self> {
        let mut entries = self.entries.clone();
        let mut n = 0;
        for (e, v) in entries.iter_mut().zip(values) {
            e.value = v;
            n += 1;
        }
        if n != entries.len() {
            return Err(Error::Precondition(format!(
                "expected {} values, got {n}",
                entries.len()
            )));
        }
        RingSampleSet::from_entries(entries)
    }
}

/// Ring sample positions for every configured baseline; values are zero.
pub fn ring_points(cfg: &RingConfig) -> Result<RingSampleSet> {
    cfg.validate()?;
    let n = cfg.samples_per_ring();
    let mut entries = Vec::with_capacity(n * cfg.baselines_lambda.len());
    for &d in &cfg.baselines_lambda {
        for k in 0..n {
            let gamma = cfg.gamma(k);
            let (s, c) = gamma.sin_cos();
            entries.push(RingSample {
                k,
                gamma,
                u: d * s,
                v: d * c,
                value: Complex64::new(0.0, 0.0),
                baseline: d,
            });
        }
    }
    RingSampleSet::from_entries(entries)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotationSchedule {
    /// Time to synthesize one ring, seconds.
    pub t_ring: f64,
    /// Fastest rotation rate that still visits every encoder angle, rev/s.
    pub gamma_ring: f64,
    pub feasible: bool,
}

/// Ring acquisition time and the rotation-rate ceiling. Above the ceiling
/// the array moves past encoder angles before their dwell completes.
pub fn rotation_schedule(cfg: &RingConfig) -> Result<RotationSchedule> {
    if !(cfg.dwell > 0.0 && cfg.dwell.is_finite()) {
        return Err(Error::Domain(format!("dwell must be positive, got {}", cfg.dwell)));
    }
    cfg.validate()?;
    let k = cfg.samples_per_ring() as f64;
    let t_ring = k * cfg.dwell;
    let revolutions = cfg.span / std::f64::consts::TAU;
    let gamma_ring = revolutions / t_ring;
    Ok(RotationSchedule {
        t_ring,
        gamma_ring,
        feasible: cfg.rotation_rate <= gamma_ring,
    })
}

/// Bilinear interpolation of a gridded visibility at `(u, v)`.
pub fn interpolate(vis: &VisibilityGrid, u: f64, v: f64) -> Option<Complex64> {
    let fx = vis.x_axis.fractional(u)?;
    let fy = vis.y_axis.fractional(v)?;
    let (x0, y0) = (fx.floor() as usize, fy.floor() as usize);
    let x1 = (x0 + 1).min(vis.cols() - 1);
    let y1 = (y0 + 1).min(vis.rows() - 1);
    let (tx, ty) = (fx - x0 as f64, fy - y0 as f64);
    let a = vis.get(y0, x0);
    let b = vis.get(y0, x1);
    let c = vis.get(y1, x0);
    let d = vis.get(y1, x1);
    Some(a * ((1.0 - tx) * (1.0 - ty)) + b * (tx * (1.0 - ty)) + c * ((1.0 - tx) * ty) + d * (tx * ty))
}

/// Fill a ring skeleton with bilinearly interpolated visibility values.
pub fn sample_ring_from_visibility(skeleton: &RingSampleSet, vis: &VisibilityGrid) -> Result<RingSampleSet> {
    let mut values = Vec::with_capacity(skeleton.len());
    for s in skeleton.entries() {
        let z = interpolate(vis, s.u, s.v).ok_or_else(|| Error::OutOfRange {
            k: s.k,
            detail: format!(
                "(u, v) = ({:.6}, {:.6}) outside visibility grid u [{:.6}, {:.6}], v [{:.6}, {:.6}]",
                s.u,
                s.v,
                vis.x_axis.min,
                vis.x_axis.max(),
                vis.y_axis.min,
                vis.y_axis.max()
            ),
        })?;
        values.push(z);
    }
    skeleton.with_values(values)
}
