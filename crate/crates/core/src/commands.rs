//! The CLI's subcommands as library functions. Each reads only its declared
//! inputs from the output directory and writes only its declared outputs
//! there; all randomness comes from the config seed.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::aimsim::{ScattererSet, Simulator};
use crate::classify::{
    classify_knn, classify_svm, classify_threshold, grid_search_svm, train_threshold, KnnModel, Label, LabeledDataset,
    LabeledRow, SvmRbfModel, ThresholdModel,
};
use crate::config::RunConfig;
use crate::dynarray::{ring_points, rotation_schedule, RingSampleSet};
use crate::error::{Error, Result};
use crate::evaluate::montecarlo::iteration_split;
use crate::evaluate::{
    evaluate_split, monte_carlo, pipeline_timing, roc_sweep, sigma_contours, ssim, ClassifierSpec, Inference, McConfig,
    McReport, TimingReport,
};
use crate::features::{extract, fit_normalizer, FeatureVector, Normalizer};
use crate::formats::{f17, featcsv, json::to_string_f17, mwgrid, read_text, ringcsv};
use crate::grid::RealGrid;
use crate::scene::SceneIntensity;
use crate::synth;
use crate::visibility::{forward_visibility, inverse_reconstruct, low_frequency_mask, reconstruct_from_ring, sample_ring_exact};

pub const SCENE_FILE: &str = "scene.mwgrid";
pub const RING_FILE: &str = "ring.ringcsv";
pub const DATASET_FILE: &str = "dataset.featcsv";
pub const MC_JSON_FILE: &str = "mc_report.json";
pub const MC_CSV_FILE: &str = "mc_report.csv";
pub const RECON_FILE: &str = "reconstruction.mwgrid";
pub const DENSE_RECON_FILE: &str = "dense_reconstruction.mwgrid";
pub const SSIM_FILE: &str = "ssim.json";
pub const TIMING_FILE: &str = "timing.json";
pub const ROC_FILE: &str = "roc.csv";
pub const CONTOURS_FILE: &str = "contours.csv";

/// Process exit code for an error: 2 config, 3 missing input, 4 schema,
/// 1 anything else.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::Json(_) => 2,
        Error::MissingInput { .. } => 3,
        Error::Schema { .. } => 4,
        _ => 1,
    }
}

/// The machine-readable error object printed on stderr.
pub fn error_json(e: &Error) -> String {
    serde_json::json!({ "error": { "kind": e.kind(), "message": e.to_string() } }).to_string()
}

fn out_path(cfg: &RunConfig, name: &str) -> PathBuf {
    cfg.output_dir.join(name)
}

fn prepare_out(cfg: &RunConfig) -> Result<()> {
    std::fs::create_dir_all(&cfg.output_dir)?;
    Ok(())
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text)?;
    Ok(())
}

/// Rasterize the configured scene.
pub fn cmd_scene(cfg: &RunConfig) -> Result<PathBuf> {
    let scene = cfg.scene.build(&cfg.geometry)?;
    prepare_out(cfg)?;
    let path = out_path(cfg, SCENE_FILE);
    mwgrid::write_real(&path, scene.grid())?;
    Ok(path)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasurePath {
    /// Exact visibility of the scene at the ring points.
    Analytic,
    /// Noise-transmitter simulation and cross-correlation.
    Oracle,
}

impl std::str::FromStr for MeasurePath {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "analytic" => Ok(MeasurePath::Analytic),
            "oracle" => Ok(MeasurePath::Oracle),
            other => Err(Error::Config(format!("unknown measurement path `{other}`"))),
        }
    }
}

/// One ring of the configured scene.
pub fn measure_ring(cfg: &RunConfig, path: MeasurePath) -> Result<RingSampleSet> {
    let sched = rotation_schedule(&cfg.ring)?;
    if !sched.feasible {
        return Err(Error::Config(format!(
            "rotation rate {} rev/s exceeds the ring limit {} rev/s for this dwell and span; certain angles will be skipped",
            cfg.ring.rotation_rate, sched.gamma_ring
        )));
    }
    let scene = cfg.scene.build(&cfg.geometry)?;
    match path {
        MeasurePath::Analytic => sample_ring_exact(&scene, &ring_points(&cfg.ring)?),
        MeasurePath::Oracle => {
            let mut sim_cfg = cfg.noise_sim.clone().unwrap_or_default();
            sim_cfg.seed = cfg.seed;
            let b = sim_cfg.baseline_lambda();
            let rb = &cfg.ring.baselines_lambda;
            if rb.len() != 1 || ((rb[0] - b) / b).abs() > 1e-6 {
                return Err(Error::Config(format!(
                    "oracle path needs a single ring baseline equal to the receiver baseline {b} wavelengths, got {rb:?}"
                )));
            }
            let sim = Simulator::new(sim_cfg, ScattererSet::from_scene(&scene))?;
            sim.measure_ring(&cfg.ring)
        }
    }
}

pub fn cmd_measure(cfg: &RunConfig, path: MeasurePath) -> Result<PathBuf> {
    let ring = measure_ring(cfg, path)?;
    prepare_out(cfg)?;
    let out = out_path(cfg, RING_FILE);
    ringcsv::write(&out, &ring)?;
    Ok(out)
}

/// Raw feature rows: imported rings when configured, synthetic otherwise.
pub fn build_dataset(cfg: &RunConfig) -> Result<LabeledDataset> {
    if cfg.import.is_empty() {
        return synth::dataset(&cfg.synth, cfg.seed);
    }
    let rows = cfg
        .import
        .iter()
        .map(|imp| {
            let ring = ringcsv::read(&imp.path)?;
            Ok(LabeledRow {
                features: extract(&ring)?,
                label: imp.label,
                source_id: imp.path.display().to_string(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LabeledDataset::new(rows))
}

pub fn cmd_dataset(cfg: &RunConfig) -> Result<PathBuf> {
    let data = build_dataset(cfg)?;
    prepare_out(cfg)?;
    let out = out_path(cfg, DATASET_FILE);
    featcsv::write(&out, &data)?;
    Ok(out)
}

/// Classifier family selected on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Threshold,
    Knn,
    Svm,
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "thr" => Ok(Family::Threshold),
            "knn" => Ok(Family::Knn),
            "svm" => Ok(Family::Svm),
            other => Err(Error::Config(format!("unknown classifier `{other}`, expected thr, knn or svm"))),
        }
    }
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Threshold => "thr",
            Family::Knn => "knn",
            Family::Svm => "svm",
        }
    }

    pub fn matches(self, spec: &ClassifierSpec) -> bool {
        matches!(
            (self, spec),
            (Family::Threshold, ClassifierSpec::Threshold { .. })
                | (Family::Knn, ClassifierSpec::Knn { .. })
                | (Family::Svm, ClassifierSpec::Svm { .. })
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum TrainedModel {
    Threshold {
        n_consecutive: usize,
        model: ThresholdModel,
    },
    Knn {
        model: KnnModel,
    },
    Svm {
        c: f64,
        gamma: f64,
        cv_accuracy: f64,
        model: SvmRbfModel,
    },
}

/// A trained classifier together with the normalizer fitted on its
/// training rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelArtifact {
    pub classifier: String,
    pub normalizer: Normalizer,
    pub trained: TrainedModel,
}

impl ModelArtifact {
    /// Real-valued score of one raw feature vector; larger means more
    /// likely positive.
    pub fn decision_value(&self, raw: &FeatureVector) -> f64 {
        let x = self.normalizer.apply(raw);
        match &self.trained {
            TrainedModel::Threshold { model, .. } => model.decision_value(x.magnitude.expect("normalized")),
            TrainedModel::Knn { model } => model.decision_value(&x.to_array()),
            TrainedModel::Svm { model, .. } => model.decision_value(&x.to_array()),
        }
    }

    /// Label of one raw feature vector (threshold models vote on that single response).
    pub fn classify(&self, raw: &FeatureVector) -> Label {
        let x = self.normalizer.apply(raw);
        match &self.trained {
            TrainedModel::Threshold { model, .. } => model.vote(x.magnitude.expect("normalized")),
            TrainedModel::Knn { model } => classify_knn(model, &x.to_array()),
            TrainedModel::Svm { model, .. } => classify_svm(model, &x.to_array()).0,
        }
    }
}

/// Train one configured classifier on every row of `data`.
pub fn train_model(data: &LabeledDataset, spec: &ClassifierSpec) -> Result<ModelArtifact> {
    data.require_both_classes()?;
    let raw: Vec<FeatureVector> = data.rows.iter().map(|r| r.features).collect();
    let normalizer = fit_normalizer(&raw)?;
    let x: Vec<FeatureVector> = raw.iter().map(|f| normalizer.apply(f)).collect();
    let labels = data.labels();
    let arrays = || x.iter().map(|f| f.to_array().to_vec()).collect::<Vec<_>>();
    let trained = match spec {
        ClassifierSpec::Threshold { n_consecutive } => {
            let mags: Vec<f64> = x.iter().map(|f| f.magnitude.expect("normalized")).collect();
            TrainedModel::Threshold {
                n_consecutive: *n_consecutive,
                model: train_threshold(&mags, &labels)?,
            }
        }
        ClassifierSpec::Knn { k } => TrainedModel::Knn {
            model: KnnModel::new(*k, arrays(), labels)?,
        },
        ClassifierSpec::Svm {
            c_grid,
            gamma_grid,
            objective,
        } => {
            let r = grid_search_svm(&arrays(), &labels, c_grid, gamma_grid, *objective)?;
            TrainedModel::Svm {
                c: r.c,
                gamma: r.gamma,
                cv_accuracy: r.accuracy,
                model: r.model,
            }
        }
        ClassifierSpec::ConstantPositive => {
            return Err(Error::Config("the constant baseline has nothing to train".into()));
        }
    };
    Ok(ModelArtifact {
        classifier: spec.name(),
        normalizer,
        trained,
    })
}

fn read_dataset(cfg: &RunConfig) -> Result<LabeledDataset> {
    featcsv::read(&out_path(cfg, DATASET_FILE))
}

/// Train the first configured classifier of `family` on the whole dataset.
pub fn cmd_train(cfg: &RunConfig, family: Family) -> Result<PathBuf> {
    let spec = cfg
        .classifiers
        .iter()
        .find(|s| family.matches(s))
        .ok_or_else(|| Error::Config(format!("no `{}` classifier in the config", family.as_str())))?;
    let data = read_dataset(cfg)?;
    let artifact = train_model(&data, spec)?;
    prepare_out(cfg)?;
    let out = out_path(cfg, &format!("model_{}.json", family.as_str()));
    write_text(&out, &to_string_f17(&artifact)?)?;
    Ok(out)
}

/// Classify every row of a dataset with a saved model; threshold models
/// vote over `n_consecutive` responses of the row and the following rows.
pub fn predict(artifact: &ModelArtifact, data: &LabeledDataset) -> Result<Vec<Label>> {
    match &artifact.trained {
        TrainedModel::Threshold { n_consecutive, model } => {
            let mags: Vec<f64> = data
                .rows
                .iter()
                .map(|r| artifact.normalizer.apply(&r.features).magnitude.expect("normalized"))
                .collect();
            (0..mags.len())
                .map(|i| {
                    let window: Vec<f64> = (0..*n_consecutive).map(|o| mags[(i + o) % mags.len()]).collect();
                    classify_threshold(model, &window)
                })
                .collect()
        }
        _ => Ok(data.rows.iter().map(|r| artifact.classify(&r.features)).collect()),
    }
}

/// Monte-Carlo evaluation of the configured classifiers, optionally
/// restricted to one family.
pub fn run_eval(cfg: &RunConfig, data: &LabeledDataset, family: Option<Family>, iters: Option<usize>) -> Result<McReport> {
    let specs: Vec<ClassifierSpec> = cfg
        .classifiers
        .iter()
        .filter(|s| family.is_none_or(|f| f.matches(s)))
        .cloned()
        .collect();
    if specs.is_empty() {
        return Err(Error::Config("no configured classifier matches the selection".into()));
    }
    let mc = McConfig {
        iters: iters.unwrap_or(cfg.eval.iters),
        train_frac: cfg.eval.train_frac,
        seed: cfg.seed,
    };
    monte_carlo(data, &specs, &mc)
}

/// One row per classifier: means and population standard deviations.
pub fn mc_report_csv(r: &McReport) -> String {
    let mut s = String::from(
        "classifier,tpr_mean,fpr_mean,acc_mean,f1_mean,tpr_std,fpr_std,acc_std,f1_std,iterations,seed,train_frac\n",
    );
    for c in &r.classifiers {
        let vals = [
            c.mean.tpr, c.mean.fpr, c.mean.acc, c.mean.f1, c.std.tpr, c.std.fpr, c.std.acc, c.std.f1,
        ];
        let _ = write!(s, "{}", c.name);
        for v in vals {
            let _ = write!(s, ",{}", f17(v));
        }
        let _ = writeln!(s, ",{},{},{}", r.iterations, r.seed, f17(r.train_frac));
    }
    s
}

pub fn cmd_eval(cfg: &RunConfig, family: Option<Family>, iters: Option<usize>) -> Result<(PathBuf, PathBuf)> {
    let data = read_dataset(cfg)?;
    let report = run_eval(cfg, &data, family, iters)?;
    prepare_out(cfg)?;
    let (csv, json) = (out_path(cfg, MC_CSV_FILE), out_path(cfg, MC_JSON_FILE));
    write_text(&csv, &mc_report_csv(&report))?;
    write_text(&json, &to_string_f17(&report)?)?;
    Ok((csv, json))
}

/// Reconstructions of a scene from its ring samples and from a dense
/// low-pass mask covering `dense_fraction` of the uv-grid.
pub fn reconstructions(scene: &SceneIntensity, ring: &RingSampleSet, dense_fraction: f64) -> Result<(RealGrid, RealGrid)> {
    let vis = forward_visibility(scene)?;
    let sparse = reconstruct_from_ring(ring, vis.x_axis, vis.y_axis)?;
    let dense = inverse_reconstruct(&low_frequency_mask(&vis, dense_fraction)?)?;
    Ok((sparse.image, dense.image))
}

pub fn cmd_reconstruct(cfg: &RunConfig) -> Result<(PathBuf, PathBuf)> {
    let grid = mwgrid::read(&out_path(cfg, SCENE_FILE))?.into_real(SCENE_FILE)?;
    let ring = ringcsv::read(&out_path(cfg, RING_FILE))?;
    let scene = SceneIntensity::from_grid(grid)?;
    let (sparse, dense) = reconstructions(&scene, &ring, cfg.privacy.dense_fraction)?;
    prepare_out(cfg)?;
    let (a, b) = (out_path(cfg, RECON_FILE), out_path(cfg, DENSE_RECON_FILE));
    mwgrid::write_real(&a, &sparse)?;
    mwgrid::write_real(&b, &dense)?;
    Ok((a, b))
}

/// SSIM of two intensity images after clipping negatives and scaling each
/// by its own peak.
pub fn image_ssim(reference: &RealGrid, test: &RealGrid) -> Result<f64> {
    ssim(&reference.clipped_unit(), &test.clipped_unit())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SsimResult {
    pub ssim: f64,
}

pub fn cmd_ssim(reference: &Path, test: &Path, out: Option<&Path>) -> Result<SsimResult> {
    let name = |p: &Path| p.display().to_string();
    let r = mwgrid::read(reference)?.into_real(&name(reference))?;
    let t = mwgrid::read(test)?.into_real(&name(test))?;
    let result = SsimResult {
        ssim: image_ssim(&r, &t)?,
    };
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
        write_text(&dir.join(SSIM_FILE), &to_string_f17(&result)?)?;
    }
    Ok(result)
}

/// Per-iteration, mean and swept ROC points for every classifier.
pub fn roc_csv(cfg: &RunConfig, data: &LabeledDataset, report: &McReport) -> Result<String> {
    let mut s = String::from("classifier,kind,index,fpr,tpr,threshold\n");
    let specs: Vec<ClassifierSpec> = cfg
        .classifiers
        .iter()
        .filter(|c| report.classifiers.iter().any(|r| r.name == c.name()))
        .cloned()
        .collect();
    for c in &report.classifiers {
        for (i, (fpr, tpr)) in c.points.iter().enumerate() {
            let _ = writeln!(s, "{},iteration,{i},{},{},", c.name, f17(*fpr), f17(*tpr));
        }
        let _ = writeln!(s, "{},mean,0,{},{},", c.name, f17(c.mean.fpr), f17(c.mean.tpr));
    }
    // threshold sweeps of the score-producing classifiers on the first split
    let mc = McConfig {
        iters: 1,
        train_frac: report.train_frac,
        seed: report.seed,
    };
    let split = iteration_split(data, &mc, 0)?;
    let outcomes = evaluate_split(data, &specs, &split)?;
    for (spec, o) in specs.iter().zip(outcomes) {
        let Some(scores) = o.scores else { continue };
        for (i, p) in roc_sweep(&scores).iter().enumerate() {
            let th = if p.threshold.is_infinite() { "inf".to_string() } else { f17(p.threshold) };
            let _ = writeln!(s, "{},sweep,{i},{},{},{th}", spec.name(), f17(p.fpr), f17(p.tpr));
        }
    }
    Ok(s)
}

/// One-, two- and three-sigma ellipses of each classifier's Monte-Carlo
/// (FPR, TPR) cloud, as closed outlines.
pub fn contours_csv(report: &McReport) -> String {
    let mut s = String::from("classifier,sigma,index,fpr,tpr\n");
    for c in &report.classifiers {
        match sigma_contours(&c.points) {
            Ok(sc) => {
                for (n, e) in sc.ellipses.iter().enumerate() {
                    for (i, (x, y)) in e.outline(sc.mean, 64).iter().enumerate() {
                        let _ = writeln!(s, "{},{},{i},{},{}", c.name, n + 1, f17(*x), f17(*y));
                    }
                }
            }
            Err(e) => log::warn!("no contours for {}: {e}", c.name),
        }
    }
    s
}

/// Per-stage wall-clock timing with one inference stage per configured
/// classifier, each trained on the whole dataset.
pub fn timing_report(cfg: &RunConfig, data: &LabeledDataset) -> Result<TimingReport> {
    let scene = cfg.scene.build(&cfg.geometry)?;
    let models: Vec<ModelArtifact> = cfg
        .classifiers
        .iter()
        .filter(|s| !matches!(s, ClassifierSpec::ConstantPositive))
        .map(|s| train_model(data, s))
        .collect::<Result<_>>()?;
    let closures: Vec<_> = models.iter().map(|m| move |f: &FeatureVector| m.decision_value(f)).collect();
    let infer: Vec<Inference<'_>> = models
        .iter()
        .zip(&closures)
        .map(|(m, f)| (m.classifier.as_str(), f as &dyn Fn(&FeatureVector) -> f64))
        .collect();
    pipeline_timing(&scene, &cfg.ring, &infer, cfg.timing.repetitions)
}

/// Timing JSON, ROC CSV and contour CSV from the dataset and the saved
/// Monte-Carlo report.
pub fn cmd_report(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let data = read_dataset(cfg)?;
    let report: McReport = serde_json::from_str(&read_text(&out_path(cfg, MC_JSON_FILE))?)
        .map_err(|e| Error::schema(MC_JSON_FILE, e.to_string()))?;
    let timing = timing_report(cfg, &data)?;
    prepare_out(cfg)?;
    let paths = [TIMING_FILE, ROC_FILE, CONTOURS_FILE].map(|n| out_path(cfg, n));
    write_text(&paths[0], &to_string_f17(&timing)?)?;
    write_text(&paths[1], &roc_csv(cfg, &data, &report)?)?;
    write_text(&paths[2], &contours_csv(&report))?;
    Ok(paths.to_vec())
}
