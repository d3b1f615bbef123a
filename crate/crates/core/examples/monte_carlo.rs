//! Monte-Carlo evaluation over repeated 70/30 splits of the bundled dataset,
//! with sigma contours and a ROC sweep for the SVM.

use ringfilter::classify::Label;
use ringfilter::config::default_classifiers;
use ringfilter::evaluate::montecarlo::iteration_split;
use ringfilter::evaluate::roc::auc;
use ringfilter::evaluate::{evaluate_split, monte_carlo, roc_sweep, sigma_contours, ClassifierSpec, McConfig};
use ringfilter::formats::featcsv;

const BUNDLED: &str = include_str!("../data/synthetic.featcsv");

fn main() -> ringfilter::Result<()> {
    let data = featcsv::decode(BUNDLED, "bundled dataset")?;
    let specs = default_classifiers();
    let cfg = McConfig {
        iters: 50,
        train_frac: 0.7,
        seed: 7,
    };
    let report = monte_carlo(&data, &specs, &cfg)?;
    println!("{:>14} {:>7} {:>7} {:>7} {:>7}", "classifier", "ACC", "+-", "TPR", "FPR");
    for c in &report.classifiers {
        println!("{:>14} {:>7.4} {:>7.4} {:>7.4} {:>7.4}", c.name, c.mean.acc, c.std.acc, c.mean.tpr, c.mean.fpr);
    }

    let svm = report.classifiers.iter().find(|c| c.name == "svm_rbf").expect("svm configured");
    let sc = sigma_contours(&svm.points)?;
    for e in &sc.ellipses {
        println!("svm {}-sigma ellipse: {:.4} x {:.4}", e.n_sigma, e.semi_major, e.semi_minor);
    }

    let split = iteration_split(&data, &cfg, 0)?;
    let out = evaluate_split(&data, &[ClassifierSpec::default_svm()], &split)?;
    let scores: Vec<(f64, Label)> = out[0].scores.clone().unwrap_or_default();
    let curve = roc_sweep(&scores);
    println!("svm ROC on split 0: {} points, AUC {:.4}", curve.len(), auc(&curve));
    Ok(())
}
