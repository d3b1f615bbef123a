//! Run configuration shared by every CLI command.
//!
//! Only `seed` is required; everything else has a default. Unknown fields
//! are rejected so a typo cannot silently fall back to a default.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::aimsim::NoiseSimConfig;
use crate::classify::{knn::DEFAULT_K_VALUES, threshold::MAX_CONSECUTIVE, Label};
use crate::dynarray::RingConfig;
use crate::error::{Error, Result};
use crate::evaluate::ClassifierSpec;
use crate::scene::{gun_shape, make_scene, torso_phantom, GeometryContext, GridSpec, SceneIntensity, ShapeSpec, METAL_AMPLITUDE, PHANTOM_AMPLITUDE};
use crate::synth::SynthConfig;

/// Gun-shape target placed by centre and orientation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GunPlacement {
    #[serde(default)]
    pub center: (f64, f64),
    /// Radians.
    #[serde(default)]
    pub orientation: f64,
    #[serde(default = "metal")]
    pub amplitude: f64,
}

fn metal() -> f64 {
    METAL_AMPLITUDE
}

fn phantom() -> f64 {
    PHANTOM_AMPLITUDE
}

/// Torso ellipse, physical size in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorsoPlacement {
    #[serde(default)]
    pub center: (f64, f64),
    pub width_m: f64,
    pub height_m: f64,
    #[serde(default = "phantom")]
    pub amplitude: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SceneConfig {
    pub grid: GridSpec,
    /// Raw shapes in direction-cosine coordinates.
    pub shapes: Vec<ShapeSpec>,
    pub torso: Option<TorsoPlacement>,
    pub gun: Option<GunPlacement>,
}

impl SceneConfig {
    pub fn all_shapes(&self, ctx: &GeometryContext) -> Result<Vec<ShapeSpec>> {
        let mut out = Vec::new();
        if let Some(t) = &self.torso {
            out.push(torso_phantom(ctx, t.center, t.width_m, t.height_m, t.amplitude)?);
        }
        out.extend(self.shapes.iter().cloned());
        if let Some(g) = &self.gun {
            out.push(gun_shape(ctx, g.center, g.orientation, g.amplitude)?);
        }
        Ok(out)
    }

    pub fn build(&self, ctx: &GeometryContext) -> Result<SceneIntensity> {
        make_scene(&self.grid, &self.all_shapes(ctx)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EvalSettings {
    pub iters: usize,
    pub train_frac: f64,
}

impl Default for EvalSettings {
    fn default() -> Self {
        EvalSettings {
            iters: 500,
            train_frac: 0.7,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PrivacySettings {
    /// uv-grid fraction of the dense low-pass counter-example.
    pub dense_fraction: f64,
}

impl Default for PrivacySettings {
    fn default() -> Self {
        PrivacySettings { dense_fraction: 0.5 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TimingSettings {
    pub repetitions: usize,
}

impl Default for TimingSettings {
    fn default() -> Self {
        TimingSettings { repetitions: 20 }
    }
}

/// A measured ring brought in from outside, with its known label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImportedRing {
    pub path: PathBuf,
    pub label: Label,
}

/// Threshold N = 1..=7, KNN over the default K values, then SVM-RBF.
pub fn default_classifiers() -> Vec<ClassifierSpec> {
    let mut v: Vec<ClassifierSpec> = (1..=MAX_CONSECUTIVE)
        .map(|n| ClassifierSpec::Threshold { n_consecutive: n })
        .collect();
    v.extend(DEFAULT_K_VALUES.iter().map(|&k| ClassifierSpec::Knn { k }));
    v.push(ClassifierSpec::default_svm());
    v
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub geometry: GeometryContext,
    #[serde(default)]
    pub scene: SceneConfig,
    #[serde(default)]
    pub ring: RingConfig,
    /// Needed only by the oracle measurement path.
    #[serde(default)]
    pub noise_sim: Option<NoiseSimConfig>,
    /// Synthetic dataset; self-contained, so its ring and geometry are its own.
    #[serde(default)]
    pub synth: SynthConfig,
    /// When non-empty, `dataset` reads these instead of synthesizing.
    #[serde(default)]
    pub import: Vec<ImportedRing>,
    #[serde(default = "default_classifiers")]
    pub classifiers: Vec<ClassifierSpec>,
    #[serde(default)]
    pub eval: EvalSettings,
    #[serde(default)]
    pub privacy: PrivacySettings,
    #[serde(default)]
    pub timing: TimingSettings,
}

impl RunConfig {
    /// Minimal valid config.
    pub fn with_seed(seed: u64) -> Self {
        serde_json::from_value(serde_json::json!({ "seed": seed })).expect("defaults deserialize")
    }

    /// Parse JSON text, applying command-line overrides before validation.
    pub fn from_json(text: &str, seed: Option<u64>, output_dir: Option<&Path>) -> Result<Self> {
        let mut value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("malformed config JSON: {e}")))?;
        let obj = value
            .as_object_mut()
            .ok_or_else(|| Error::Config("config must be a JSON object".into()))?;
        if let Some(s) = seed {
            obj.insert("seed".into(), s.into());
        }
        if let Some(d) = output_dir {
            obj.insert("output_dir".into(), d.display().to_string().into());
        }
        let cfg: RunConfig = serde_json::from_value(value).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.scene.grid.validate()?;
        for s in &self.scene.shapes {
            s.validate()?;
        }
        self.ring.validate()?;
        if let Some(n) = &self.noise_sim {
            n.validate()?;
        }
        self.synth.validate()?;
        if self.classifiers.is_empty() {
            return Err(Error::Config("no classifiers configured".into()));
        }
        for c in &self.classifiers {
            c.validate()?;
        }
        if self.eval.iters == 0 {
            return Err(Error::Config("eval.iters must be at least 1".into()));
        }
        if !(self.eval.train_frac > 0.0 && self.eval.train_frac < 1.0) {
            return Err(Error::Config("eval.train_frac must be in (0, 1)".into()));
        }
        if !(self.privacy.dense_fraction > 0.0 && self.privacy.dense_fraction <= 1.0) {
            return Err(Error::Config("privacy.dense_fraction must be in (0, 1]".into()));
        }
        if self.timing.repetitions == 0 {
            return Err(Error::Config("timing.repetitions must be at least 1".into()));
        }
        Ok(())
    }
}
