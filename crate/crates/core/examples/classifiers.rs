//! Threshold, KNN and RBF-SVM trained on one stratified split of the bundled
//! synthetic dataset.

use ringfilter::classify::grid_search::{default_c_grid, default_gamma_grid};
use ringfilter::classify::{classify_knn, classify_svm, classify_threshold, grid_search_svm, train_threshold, KnnModel, SearchObjective};
use ringfilter::evaluate::montecarlo::stratified_split;
use ringfilter::features::fit_normalizer;
use ringfilter::formats::featcsv;
use ringfilter::seed::{rng_for, Stream};

const BUNDLED: &str = include_str!("../data/synthetic.featcsv");

fn main() -> ringfilter::Result<()> {
    let data = featcsv::decode(BUNDLED, "bundled dataset")?;
    let labels = data.labels();
    let split = stratified_split(&labels, 0.7, &mut rng_for(1, Stream::MonteCarlo, 0))?;

    let norm = fit_normalizer(&split.train.iter().map(|&i| data.rows[i].features).collect::<Vec<_>>())?;
    let scaled = |idx: &[usize]| -> Vec<Vec<f64>> {
        idx.iter().map(|&i| norm.apply(&data.rows[i].features).to_array().to_vec()).collect()
    };
    let (xtr, xte) = (scaled(&split.train), scaled(&split.test));
    let ltr: Vec<_> = split.train.iter().map(|&i| labels[i]).collect();
    let lte: Vec<_> = split.test.iter().map(|&i| labels[i]).collect();
    let acc = |pred: Vec<_>| pred.iter().zip(&lte).filter(|(p, t)| p == t).count() as f64 / lte.len() as f64;
    println!("{} train / {} test rows", xtr.len(), xte.len());

    let mag = |x: &[Vec<f64>]| -> Vec<f64> { x.iter().map(|v| v.iter().map(|a| a * a).sum::<f64>().sqrt()).collect() };
    let thr = train_threshold(&mag(&xtr), &ltr)?;
    let test_mag = mag(&xte);
    let pred = test_mag.iter().map(|&m| classify_threshold(&thr, &[m])).collect::<Result<Vec<_>, _>>()?;
    println!("threshold  t={:.3} {:?}: ACC {:.3}", thr.threshold, thr.polarity, acc(pred));

    for k in [7, 15] {
        let model = KnnModel::new(k, xtr.clone(), ltr.clone())?;
        println!("knn        K={k:<2}: ACC {:.3}", acc(xte.iter().map(|q| classify_knn(&model, q)).collect()));
    }

    let gs = grid_search_svm(&xtr, &ltr, &default_c_grid(), &default_gamma_grid(), SearchObjective::default())?;
    println!(
        "svm-rbf    C={:e} gamma={:e} (CV {:.3}), {} support vectors: ACC {:.3}",
        gs.c,
        gs.gamma,
        gs.accuracy,
        gs.model.support_vectors.len(),
        acc(xte.iter().map(|q| classify_svm(&gs.model, q).0).collect())
    );
    Ok(())
}
