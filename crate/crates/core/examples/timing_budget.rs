//! Per-stage compute time of one ring, from scene to decision.

use ringfilter::classify::{train_threshold, KnnModel, Label};
use ringfilter::dynarray::RingConfig;
use ringfilter::evaluate::{pipeline_timing, Inference};
use ringfilter::features::{FeatureVector, N_FEATURES};
use ringfilter::scene::{gun_shape_scene, GeometryContext};

fn main() -> ringfilter::Result<()> {
    let scene = gun_shape_scene(&GeometryContext::default(), 0.3)?;

    // toy models; only their cost matters here
    let pts: Vec<Vec<f64>> = (0..112).map(|i| vec![(i % 17) as f64 / 17.0; N_FEATURES]).collect();
    let labels: Vec<Label> = (0..112).map(|i| if i % 2 == 0 { Label::Negative } else { Label::Positive }).collect();
    let knn = KnnModel::new(7, pts, labels.clone())?;
    let thr = train_threshold(&(0..112).map(|i| i as f64).collect::<Vec<_>>(), &labels)?;

    let knn_f = |fv: &FeatureVector| knn.decision_value(&fv.to_array());
    let thr_f = |fv: &FeatureVector| thr.decision_value(fv.mean);
    let infer: [Inference; 2] = [("knn_k7", &knn_f), ("threshold", &thr_f)];
    let t = pipeline_timing(&scene, &RingConfig::default(), &infer, 20)?;

    println!("{:>22} {:>10}", "stage", "ms");
    println!("{:>22} {:>10.3}", "acquisition (simulated)", t.simulated_acquisition_ms);
    for s in &t.stages {
        println!("{:>22} {:>10.4}", s.stage, s.ms);
    }
    println!("{:>22} {:>10.3}", "total compute", t.total_compute_ms);
    Ok(())
}
