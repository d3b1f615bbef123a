//! Per-stage timing of the measurement-to-decision pipeline.
//!
//! Acquisition time is not measured: it is the physical dwell budget
//! `K * tau` of the ring. The other stages are wall-clock compute times
//! averaged over repetitions.

use std::hint::black_box;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::dynarray::{ring_points, rotation_schedule, sample_ring_from_visibility, RingConfig};
use crate::error::{Error, Result};
use crate::features::{extract, FeatureVector};
use crate::scene::SceneIntensity;
use crate::visibility::forward_visibility;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageTiming {
    pub stage: String,
    pub ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingReport {
    pub repetitions: usize,
    pub simulated_acquisition_ms: f64,
    pub stages: Vec<StageTiming>,
    /// Visibility plus features plus the slowest inference, acquisition excluded.
    pub total_compute_ms: f64,
}

impl TimingReport {
    pub fn stage_ms(&self, name: &str) -> Option<f64> {
        self.stages.iter().find(|s| s.stage == name).map(|s| s.ms)
    }
}

pub fn simulated_acquisition_ms(ring: &RingConfig) -> Result<f64> {
    Ok(rotation_schedule(ring)?.t_ring * 1e3)
}

/// Mean wall-clock milliseconds of `f` over `reps` calls.
pub fn time_ms<T>(reps: usize, mut f: impl FnMut() -> T) -> f64 {
    let start = Instant::now();
    for _ in 0..reps {
        black_box(f());
    }
    start.elapsed().as_secs_f64() * 1e3 / reps as f64
}

/// One inference routine to time, by name.
pub type Inference<'a> = (&'a str, &'a dyn Fn(&FeatureVector) -> f64);

/// Time visibility generation (transform plus ring sampling), feature
/// extraction and each inference routine for one ring of `scene`. Stage
/// names are `visibility`, `features` and `inference:<name>`; the total
/// counts the slowest inference only, since one decision uses one classifier.
pub fn pipeline_timing(scene: &SceneIntensity, ring: &RingConfig, infer: &[Inference<'_>], reps: usize) -> Result<TimingReport> {
    if reps == 0 {
        return Err(Error::Config("timing needs at least 1 repetition".into()));
    }
    let acquisition = simulated_acquisition_ms(ring)?;
    let skeleton = ring_points(ring)?;
    let make_ring = || -> Result<_> {
        let vis = forward_visibility(scene)?;
        sample_ring_from_visibility(&skeleton, &vis)
    };
    let samples = make_ring()?;
    let fv = extract(&samples)?;

    let vis_ms = time_ms(reps, || make_ring().map(|s| s.len()).unwrap_or(0));
    let feat_ms = time_ms(reps, || extract(&samples).map(|f| f.mean).unwrap_or(0.0));
    let mut stages = vec![
        StageTiming {
            stage: "visibility".into(),
            ms: vis_ms,
        },
        StageTiming {
            stage: "features".into(),
            ms: feat_ms,
        },
    ];
    let mut slowest = 0.0f64;
    for (name, f) in infer {
        let ms = time_ms(reps, || f(&fv));
        slowest = slowest.max(ms);
        stages.push(StageTiming {
            stage: format!("inference:{name}"),
            ms,
        });
    }
    Ok(TimingReport {
        repetitions: reps,
        simulated_acquisition_ms: acquisition,
        total_compute_ms: vis_ms + feat_ms + slowest,
        stages,
    })
}
