//! Synthetic ring measurements of a person with and without a concealed
//! metal object.
//!
//! Each measurement rasterizes a torso phantom of jittered size and position,
//! a few point-like clutter scatterers (buttons, zips) and, for the positive
//! class, the gun-shape polygon at a random offset and orientation. The
//! ring is sampled exactly, with every scatterer drifting in phase relative
//! to the torso from one dwell to the next as the subject breathes and
//! sways. The ring is then brought to unit RMS (receiver level control) and
//! degraded further by a random overall gain per measurement, complex
//! amplitude jitter per dwell and receiver noise.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::{Label, LabeledDataset, LabeledRow};
use crate::dynarray::{ring_points, RingConfig, RingSampleSet};
use crate::error::{Error, Result};
use crate::features::extract;
use crate::scene::{gun_shape, make_scene, physical_to_direction_cosine, torso_phantom, GeometryContext, GridSpec, ShapeSpec};
use crate::seed::{rng_for, Stream};
use crate::visibility::sample_ring_exact;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SynthConfig {
    pub per_class: usize,
    pub torso_width_m: f64,
    pub torso_height_m: f64,
    /// Relative standard deviation of torso width and height.
    pub torso_size_jitter: f64,
    /// Standard deviation of the torso centre, meters.
    pub position_jitter_m: f64,
    pub clutter_count: usize,
    /// Clutter pixel amplitude range.
    pub clutter_amplitude: (f64, f64),
    pub object_amplitude: f64,
    /// Largest object offset from the torso centre, meters.
    pub object_offset_m: f64,
    /// Standard deviation of the log of the per-measurement gain, which is
    /// drawn log-uniformly.
    pub gain_log_sigma: f64,
    /// Standard deviation of the complex per-dwell amplitude jitter.
    pub dwell_jitter: f64,
    /// Per-dwell random-walk step of each scatterer's phase relative to the
    /// torso, radians. Zero freezes the subject.
    pub motion_phase_step: f64,
    pub snr_db: f64,
    pub ring: RingConfig,
    pub geometry: GeometryContext,
    pub grid: GridSpec,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            per_class: 80,
            torso_width_m: 0.36,
            torso_height_m: 0.52,
            torso_size_jitter: 0.15,
            position_jitter_m: 0.04,
            clutter_count: 6,
            clutter_amplitude: (0.0, 6.0),
            object_amplitude: 3.0,
            object_offset_m: 0.08,
            gain_log_sigma: 0.5,
            dwell_jitter: 0.05,
            motion_phase_step: 1.0,
            snr_db: 20.0,
            ring: RingConfig::default(),
            geometry: GeometryContext::default(),
            grid: GridSpec::default(),
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        if self.per_class < 2 {
            return Err(Error::Config("per_class must be at least 2".into()));
        }
        let nonneg = [
            self.torso_size_jitter,
            self.position_jitter_m,
            self.object_offset_m,
            self.gain_log_sigma,
            self.dwell_jitter,
            self.motion_phase_step,
        ];
        if nonneg.iter().any(|v| !(*v >= 0.0 && v.is_finite())) {
            return Err(Error::Config("jitter settings must be finite and non-negative".into()));
        }
        if !(self.torso_width_m > 0.0 && self.torso_height_m > 0.0 && self.object_amplitude >= 0.0) {
            return Err(Error::Config("torso size must be positive".into()));
        }
        let (lo, hi) = self.clutter_amplitude;
        if !(lo >= 0.0 && hi >= lo && hi.is_finite() && (self.clutter_count == 0 || hi > 0.0)) {
            return Err(Error::Config("clutter amplitude range must satisfy 0 <= lo <= hi with hi > 0".into()));
        }
        if !self.snr_db.is_finite() {
            return Err(Error::Config("snr_db must be finite".into()));
        }
        self.ring.validate()?;
        self.grid.validate()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    pub label: Label,
    pub source_id: String,
    pub samples: RingSampleSet,
}

fn gauss<R: Rng>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// The noiseless scene of measurement `index` together with its label.
pub fn measurement_scene(cfg: &SynthConfig, seed: u64, index: usize) -> Result<(Vec<ShapeSpec>, Label)> {
    let label = if index.is_multiple_of(2) { Label::Negative } else { Label::Positive };
    let mut rng = rng_for(seed, Stream::Dataset, index as u64);
    let ctx = &cfg.geometry;
    let dc = |m: f64| physical_to_direction_cosine(m.abs(), ctx).map(|v| v.copysign(m));

    let w = cfg.torso_width_m * (1.0 + cfg.torso_size_jitter * gauss(&mut rng)).max(0.5);
    let h = cfg.torso_height_m * (1.0 + cfg.torso_size_jitter * gauss(&mut rng)).max(0.5);
    let centre = (
        dc(cfg.position_jitter_m * gauss(&mut rng))?,
        dc(cfg.position_jitter_m * gauss(&mut rng))?,
    );
    let mut shapes = vec![torso_phantom(ctx, centre, w, h, 1.0)?];

    let (semi_l, semi_m) = (dc(0.4 * w)?, dc(0.4 * h)?);
    for _ in 0..cfg.clutter_count {
        // uniform inside the inner ellipse
        let r = rng.random::<f64>().sqrt();
        let t = std::f64::consts::TAU * rng.random::<f64>();
        // in (lo, hi], never exactly zero
        let amp = cfg.clutter_amplitude.0 + (cfg.clutter_amplitude.1 - cfg.clutter_amplitude.0) * (1.0 - rng.random::<f64>());
        shapes.push(ShapeSpec::point(centre.0 + semi_l * r * t.cos(), centre.1 + semi_m * r * t.sin(), amp));
    }

    // always draw the object parameters so both classes consume the stream alike
    let r = cfg.object_offset_m * rng.random::<f64>().sqrt();
    let t = std::f64::consts::TAU * rng.random::<f64>();
    let orientation = std::f64::consts::TAU * rng.random::<f64>();
    if label.is_positive() {
        let at = (centre.0 + dc(r * t.cos())?, centre.1 + dc(r * t.sin())?);
        shapes.push(gun_shape(ctx, at, orientation, cfg.object_amplitude)?);
    }
    Ok((shapes, label))
}

/// Ring of a subject that moves while the array turns. The torso (first
/// shape) is the phase reference; every other scatterer starts at a random
/// phase relative to it and random-walks by `motion_phase_step` radians per
/// dwell.
fn moving_ring<R: Rng>(cfg: &SynthConfig, shapes: &[ShapeSpec], skeleton: &RingSampleSet, rng: &mut R) -> Result<RingSampleSet> {
    let ring_of = |s: &[ShapeSpec]| -> Result<Vec<Complex64>> {
        Ok(sample_ring_exact(&make_scene(&cfg.grid, s)?, skeleton)?.values().collect())
    };
    let mut acc = ring_of(&shapes[..1])?;
    for shape in &shapes[1..] {
        let part = ring_of(std::slice::from_ref(shape))?;
        let mut phi = std::f64::consts::TAU * rng.random::<f64>();
        for (a, z) in acc.iter_mut().zip(part) {
            phi += cfg.motion_phase_step * gauss(rng);
            *a += z * Complex64::from_polar(1.0, phi);
        }
    }
    skeleton.with_values(acc)
}

/// One degraded ring measurement. Even indices are negatives, odd indices
/// positives.
pub fn measure(cfg: &SynthConfig, seed: u64, index: usize, skeleton: &RingSampleSet) -> Result<Measurement> {
    let (shapes, label) = measurement_scene(cfg, seed, index)?;
    // separate stream so the scene does not depend on the degradation settings
    let mut rng = rng_for(seed ^ 0x5eed_0fd3_9ad5, Stream::Dataset, index as u64);
    let clean = if cfg.motion_phase_step > 0.0 {
        moving_ring(cfg, &shapes, skeleton, &mut rng)?
    } else {
        sample_ring_exact(&make_scene(&cfg.grid, &shapes)?, skeleton)?
    };

    // log-uniform: bounded, so min-max normalization is not dominated by outliers
    let half = cfg.gain_log_sigma * 3f64.sqrt();
    let gain = (half * (2.0 * rng.random::<f64>() - 1.0)).exp();
    let power = clean.values().map(|z| z.norm_sqr()).sum::<f64>() / clean.len() as f64;
    if !(power > 0.0) {
        return Err(Error::Domain(format!("measurement {index} has an all-zero ring")));
    }
    let gain = gain / power.sqrt();
    let noise_sigma = (power / 10f64.powf(cfg.snr_db / 10.0) / 2.0).sqrt();
    let js = cfg.dwell_jitter / 2f64.sqrt();
    let values: Vec<Complex64> = clean
        .values()
        .map(|z| {
            let jitter = Complex64::new(1.0 + js * gauss(&mut rng), js * gauss(&mut rng));
            let noise = Complex64::new(noise_sigma * gauss(&mut rng), noise_sigma * gauss(&mut rng));
            gain * (z * jitter + noise)
        })
        .collect();
    Ok(Measurement {
        label,
        source_id: format!("synth-{seed}-{index:04}-{}", label.as_str()),
        samples: clean.with_values(values)?,
    })
}

/// `2 * per_class` measurements, alternating negative and positive.
pub fn generate(cfg: &SynthConfig, seed: u64) -> Result<Vec<Measurement>> {
    cfg.validate()?;
    let skeleton = ring_points(&cfg.ring)?;
    (0..2 * cfg.per_class)
        .into_par_iter()
        .map(|i| measure(cfg, seed, i, &skeleton))
        .collect()
}

/// Raw (unnormalized) features of [`generate`]'s measurements.
pub fn dataset(cfg: &SynthConfig, seed: u64) -> Result<LabeledDataset> {
    let rows = generate(cfg, seed)?
        .into_iter()
        .map(|m| {
            Ok(LabeledRow {
                features: extract(&m.samples)?,
                label: m.label,
                source_id: m.source_id,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LabeledDataset::new(rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SynthConfig {
        SynthConfig {
            per_class: 3,
            ring: RingConfig {
                step: 9f64.to_radians(),
                ..RingConfig::default()
            },
            ..SynthConfig::default()
        }
    }

    #[test]
    fn balanced_and_deterministic() {
        let a = dataset(&small(), 4).unwrap();
        assert_eq!(a.class_counts(), (3, 3));
        assert_eq!(a, dataset(&small(), 4).unwrap());
        assert_ne!(a, dataset(&small(), 5).unwrap());
    }

    #[test]
    fn only_positives_carry_the_object() {
        let cfg = small();
        let (neg, l0) = measurement_scene(&cfg, 1, 0).unwrap();
        let (pos, l1) = measurement_scene(&cfg, 1, 1).unwrap();
        assert_eq!((l0, l1), (Label::Negative, Label::Positive));
        assert_eq!(pos.len(), neg.len() + 1);
    }
}
