//! Generate a small synthetic dataset and compare per-class feature means.

use ringfilter::features::FEATURE_NAMES;
use ringfilter::synth::{dataset, SynthConfig};

fn main() -> ringfilter::Result<()> {
    let cfg = SynthConfig {
        per_class: 20,
        ..SynthConfig::default()
    };
    let data = dataset(&cfg, 3)?;
    let (pos, neg) = data.class_counts();
    println!("{} rows ({neg} negative, {pos} positive)", data.len());

    let mean_of = |positive: bool| -> Vec<f64> {
        let rows: Vec<_> = data.rows.iter().filter(|r| r.label.is_positive() == positive).collect();
        let mut m = vec![0.0; FEATURE_NAMES.len()];
        for r in &rows {
            for (a, v) in m.iter_mut().zip(r.features.to_array()) {
                *a += v / rows.len() as f64;
            }
        }
        m
    };
    let (n, p) = (mean_of(false), mean_of(true));
    println!("{:>18} {:>10} {:>10}", "feature", "person", "with gun");
    for (i, name) in FEATURE_NAMES.iter().enumerate() {
        println!("{name:>18} {:>10.4} {:>10.4}", n[i], p[i]);
    }
    Ok(())
}
