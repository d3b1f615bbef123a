//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::Rng;

use ringfilter::aimsim::{pearson_real, NoiseSimConfig, Scatterer, ScattererSet, Simulator};
use ringfilter::classify::knn::{KnnModel, DEFAULT_K_VALUES};
use ringfilter::classify::svm::{kernel_matrix, solve_dual, train_svm_rbf, SvmRbfModel, KKT_TOLERANCE};
use ringfilter::classify::{classify_knn, classify_svm, Label, LabeledDataset};
use ringfilter::commands::{image_ssim, reconstructions, timing_report};
use ringfilter::config::{default_classifiers, RunConfig};
use ringfilter::dynarray::{ring_points, RingConfig};
use ringfilter::evaluate::{metrics, monte_carlo, ConfusionCounts, McConfig};
use ringfilter::features::fit_normalizer;
use ringfilter::formats::featcsv;
use ringfilter::grid::RealGrid;
use ringfilter::scene::{gun_shape_scene, make_scene, GeometryContext, GridSpec, SceneIntensity, ShapeSpec};
use ringfilter::seed::{rng_for, Stream};
use ringfilter::visibility::{forward_visibility, inverse_reconstruct, sample_ring_exact, SampledVisibility};

const BUNDLED: &str = include_str!("../data/synthetic.featcsv");
const DEMO: &str = include_str!("../../../configs/demo.json");

type Check = Result<(bool, String), String>;
/// Number, name, check and runtime budget in seconds.
type Criterion = (u32, &'static str, fn() -> Check, u64);

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn bundled() -> Result<LabeledDataset, String> {
    featcsv::decode(BUNDLED, "bundled dataset").map_err(err)
}

// 1 ----------------------------------------------------------------------

fn ring_geometry() -> Check {
    let ring = ring_points(&RingConfig::default()).map_err(err)?;
    let n = ring.len();
    let first = ring.entries()[0].gamma.to_degrees();
    let last = ring.entries()[n - 1].gamma.to_degrees();
    let steps_ok = ring
        .entries()
        .windows(2)
        .all(|w| ((w[1].gamma - w[0].gamma).to_degrees() - 0.9).abs() < 1e-9);
    let worst = ring
        .entries()
        .iter()
        .map(|e| ((e.u * e.u + e.v * e.v).sqrt() - 77.0).abs() / 77.0)
        .fold(0.0, f64::max);
    let span = last - first + 0.9;
    let ok = n == 200 && steps_ok && (span - 180.0).abs() < 1e-9 && worst <= 1e-6;
    Ok((ok, format!("{n} samples, {first:.1}..{last:.1} deg, 0.9 deg steps {steps_ok}, worst radius error {worst:.1e}")))
}

// 2 ----------------------------------------------------------------------

fn direct_dft(scene: &SceneIntensity) -> Vec<Complex64> {
    let g = scene.grid();
    let (ua, va) = (g.x_axis.reciprocal(), g.y_axis.reciprocal());
    let mut out = Vec::with_capacity(g.values.len());
    for p in 0..va.len {
        for q in 0..ua.len {
            let (u, v) = (ua.coord(q), va.coord(p));
            let mut acc = Complex64::new(0.0, 0.0);
            for r in 0..g.rows() {
                for c in 0..g.cols() {
                    let ph = std::f64::consts::TAU * (u * g.x_axis.coord(c) + v * g.y_axis.coord(r));
                    acc += *g.get(r, c) * Complex64::from_polar(1.0, ph);
                }
            }
            out.push(acc * g.cell_area());
        }
    }
    out
}

fn fourier_oracle() -> Check {
    let spec = GridSpec {
        rows: 32,
        cols: 32,
        l_half: 0.25,
        m_half: 0.25,
    };
    let mut worst_dft = 0.0f64;
    let mut worst_parseval = 0.0f64;
    let mut worst_trip = 0.0f64;
    for seed in 0..3u64 {
        let mut rng = rng_for(seed, Stream::Dataset, 1000);
        let mut g = RealGrid::filled(spec.l_axis(), spec.m_axis(), 0.0);
        for v in &mut g.values {
            *v = rng.random::<f64>();
        }
        let scene = SceneIntensity::from_grid(g).map_err(err)?;
        let fast = forward_visibility(&scene).map_err(err)?;
        let slow = direct_dft(&scene);
        let scale = slow.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for (a, b) in fast.values.iter().zip(&slow) {
            worst_dft = worst_dft.max((a - b).norm() / scale);
        }
        let gi = scene.grid();
        let e_img: f64 = gi.values.iter().map(|x| x * x).sum::<f64>() * gi.cell_area();
        let e_vis: f64 = fast.values.iter().map(|z| z.norm_sqr()).sum::<f64>() * fast.cell_area();
        worst_parseval = worst_parseval.max(((e_img - e_vis) / e_img).abs());
        let back = inverse_reconstruct(&SampledVisibility::full(fast)).map_err(err)?;
        let peak = gi.max_value();
        for (a, b) in back.image.values.iter().zip(&gi.values) {
            worst_trip = worst_trip.max((a - b).abs() / peak);
        }
    }
    let ok = worst_dft <= 1e-9 && worst_parseval <= 1e-6 && worst_trip <= 1e-6;
    Ok((
        ok,
        format!("FFT vs direct {worst_dft:.1e}, Parseval {worst_parseval:.1e}, round trip {worst_trip:.1e} (32x32, 3 scenes)"),
    ))
}

// 3 ----------------------------------------------------------------------

fn column_correlations(measured: &[Complex64], reference: &[Complex64]) -> Result<(f64, f64), String> {
    let im = |z: &[Complex64]| -> Vec<Complex64> { z.iter().map(|v| Complex64::new(v.im, 0.0)).collect() };
    Ok((
        pearson_real(measured, reference).map_err(err)?,
        pearson_real(&im(measured), &im(reference)).map_err(err)?,
    ))
}

fn van_cittert_zernike() -> Check {
    let scatterers = ScattererSet::new(vec![
        Scatterer {
            l: 0.020,
            m: 0.010,
            reflectivity: 1.0,
        },
        Scatterer {
            l: -0.015,
            m: -0.025,
            reflectivity: 0.6,
        },
    ])
    .map_err(err)?;
    let ring = RingConfig::default();
    let analytic: Vec<Complex64> = ring_points(&ring)
        .map_err(err)?
        .entries()
        .iter()
        .map(|e| scatterers.visibility_at(e.u, e.v))
        .collect();
    let cfg = NoiseSimConfig {
        n_samples: 100_000,
        snr_db: 30.0,
        seed: 3,
        ..NoiseSimConfig::default()
    };
    let many: Vec<Complex64> = Simulator::new(cfg.clone(), scatterers.clone())
        .and_then(|s| s.measure_ring(&ring))
        .map_err(err)?
        .values()
        .collect();
    let (mr, mi) = column_correlations(&many, &analytic)?;

    let single = NoiseSimConfig {
        tx_positions: vec![(0.0, 0.30)],
        ..cfg
    };
    let one: Vec<Complex64> = Simulator::new_unvalidated(single, scatterers)
        .and_then(|s| s.measure_ring(&ring))
        .map_err(err)?
        .values()
        .collect();
    let (sr, si) = column_correlations(&one, &analytic)?;
    let ok = mr.min(mi) >= 0.95 && sr.min(si) < 0.8;
    Ok((
        ok,
        format!("16 emitters corr re {mr:.4} im {mi:.4} (>= 0.95); single emitter re {sr:.4} im {si:.4} (min < 0.8)"),
    ))
}

// 4 ----------------------------------------------------------------------

fn edge_orthogonality() -> Check {
    let skeleton = ring_points(&RingConfig::default()).map_err(err)?;
    let step = 0.9;
    let mut ok = true;
    let mut parts = Vec::new();
    for theta in [0.0f64, 30.0, 60.0, 90.0] {
        let bar = ShapeSpec::rectangle((0.0, 0.0), 0.2, 0.006, 1.0).rotated(theta.to_radians());
        let scene = make_scene(&GridSpec::default(), &[bar]).map_err(err)?;
        let ring = sample_ring_exact(&scene, &skeleton).map_err(err)?;
        let peak = ring
            .entries()
            .iter()
            .max_by(|a, b| a.value.norm().total_cmp(&b.value.norm()))
            .expect("non-empty ring");
        // polar angle of the uv sample; magnitudes repeat every 180 degrees
        let phi = peak.v.atan2(peak.u).to_degrees();
        let off = (phi - (theta + 90.0)).rem_euclid(180.0);
        let dist = off.min(180.0 - off);
        let dist = dist + 0.0;
        ok &= dist <= 2.0 * step + 1e-9;
        parts.push(format!("theta {theta:.0}: peak at {:.1} deg ({dist:.1} off)", phi.rem_euclid(180.0)));
    }
    Ok((ok, parts.join(", ")))
}

// 5 ----------------------------------------------------------------------

fn metric_identities() -> Check {
    let c = ConfusionCounts {
        tp: 989,
        fn_: 11,
        fp: 17,
        tn: 983,
    };
    let m = metrics(&c).map_err(err)?;
    let (tpr, fpr, acc, f1) = (m.tpr.unwrap(), m.fpr.unwrap(), m.acc.unwrap(), m.f1.unwrap());
    let ok = (tpr - 0.989).abs() < 1e-12 && (fpr - 0.017).abs() < 1e-12 && (acc - 0.986).abs() <= 5e-4 && (f1 - 0.9860).abs() <= 5e-4;
    Ok((ok, format!("TPR {tpr:.3} FPR {fpr:.3} -> ACC {acc:.4}, F1 {f1:.4}")))
}

// 6 ----------------------------------------------------------------------

fn classifier_ordering() -> Check {
    let data = bundled()?;
    let report = monte_carlo(
        &data,
        &default_classifiers(),
        &McConfig {
            iters: 500,
            train_frac: 0.7,
            seed: 7,
        },
    )
    .map_err(err)?;
    let accs = |prefix: &str| -> Vec<(String, f64)> {
        report
            .classifiers
            .iter()
            .filter(|c| c.name.starts_with(prefix))
            .map(|c| (c.name.clone(), c.mean.acc))
            .collect()
    };
    let (svm, knn, thr) = (accs("svm")[0].1, accs("knn"), accs("threshold"));
    let best_knn = knn.iter().map(|k| k.1).fold(f64::NEG_INFINITY, f64::max);
    let worst_knn = knn.iter().map(|k| k.1).fold(f64::INFINITY, f64::min);
    let best_thr = thr.iter().map(|k| k.1).fold(f64::NEG_INFINITY, f64::max);
    let thr_dev = thr.iter().map(|k| (k.1 - 0.5).abs()).fold(0.0, f64::max);

    let mut failed = Vec::new();
    if svm < best_knn {
        failed.push(format!("SVM {svm:.4} < best KNN {best_knn:.4}"));
    }
    if worst_knn < best_thr {
        failed.push(format!("worst KNN {worst_knn:.4} < best threshold {best_thr:.4}"));
    }
    if svm < 0.95 {
        failed.push(format!("SVM {svm:.4} < 0.95"));
    }
    if thr_dev > 0.1 {
        failed.push(format!("threshold deviates {thr_dev:.4} from 0.5"));
    }
    let table: Vec<String> = report.classifiers.iter().map(|c| format!("{} {:.4}", c.name, c.mean.acc)).collect();
    let mut detail = format!("500 iterations, mean ACC: {}", table.join(", "));
    if !failed.is_empty() {
        detail = format!("{}; {}", failed.join("; "), detail);
    }
    Ok((failed.is_empty(), detail))
}

// 7 ----------------------------------------------------------------------

/// Dual objective `0.5 a'Qa - sum a` minimized exactly by enumerating which
/// bound each variable sits at and solving the equality-constrained system
/// on the free ones.
fn brute_force_dual(kmat: &[f64], y: &[f64], c: f64) -> f64 {
    let n = y.len();
    let q = |i: usize, j: usize| y[i] * y[j] * kmat[i * n + j];
    let objective = |a: &[f64]| {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += 0.5 * a[i] * a[j] * q(i, j);
            }
            s -= a[i];
        }
        s
    };
    let mut best = f64::INFINITY;
    for code in 0..3usize.pow(n as u32) {
        let state: Vec<usize> = (0..n).map(|i| (code / 3usize.pow(i as u32)) % 3).collect();
        let free: Vec<usize> = (0..n).filter(|&i| state[i] == 2).collect();
        let mut a: Vec<f64> = state.iter().map(|&s| if s == 1 { c } else { 0.0 }).collect();
        if !free.is_empty() {
            // [Q_FF y_F; y_F' 0] [a_F; mu] = [1 - Q_FB a_B; -y_B' a_B]
            let m = free.len() + 1;
            let mut sys = vec![vec![0.0; m + 1]; m];
            for (r, &i) in free.iter().enumerate() {
                for (cc, &j) in free.iter().enumerate() {
                    sys[r][cc] = q(i, j);
                }
                sys[r][m - 1] = y[i];
                sys[r][m] = 1.0 - (0..n).filter(|j| state[*j] != 2).map(|j| q(i, j) * a[j]).sum::<f64>();
            }
            for (cc, &j) in free.iter().enumerate() {
                sys[m - 1][cc] = y[j];
            }
            sys[m - 1][m] = -(0..n).filter(|j| state[*j] != 2).map(|j| y[j] * a[j]).sum::<f64>();
            let Some(sol) = gauss_solve(sys) else { continue };
            for (r, &i) in free.iter().enumerate() {
                a[i] = sol[r];
            }
        }
        let feasible = a.iter().all(|v| *v >= -1e-12 && *v <= c + 1e-12)
            && a.iter().zip(y).map(|(v, yi)| v * yi).sum::<f64>().abs() <= 1e-9;
        if feasible {
            best = best.min(objective(&a));
        }
    }
    best
}

fn gauss_solve(mut m: Vec<Vec<f64>>) -> Option<Vec<f64>> {
    let n = m.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[piv][col].abs() < 1e-12 {
            return None;
        }
        m.swap(col, piv);
        let pivot = m[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != col {
                let f = row[col] / pivot[col];
                for (x, p) in row[col..].iter_mut().zip(&pivot[col..]) {
                    *x -= f * p;
                }
            }
        }
    }
    Some(m.iter().enumerate().map(|(i, row)| row[n] / row[i]).collect())
}

/// Box, equality and complementary-slackness conditions of a dual solution.
fn kkt_violation(kmat: &[f64], y: &[f64], c: f64, alpha: &[f64], bias: f64) -> f64 {
    let n = y.len();
    let mut worst = alpha.iter().zip(y).map(|(a, yi)| a * yi).sum::<f64>().abs();
    for t in 0..n {
        if alpha[t] < -1e-12 || alpha[t] > c + 1e-12 {
            return f64::INFINITY;
        }
        let f: f64 = (0..n).map(|i| alpha[i] * y[i] * kmat[t * n + i]).sum::<f64>() + bias;
        let margin = y[t] * f;
        let v = if alpha[t] <= 0.0 {
            (1.0 - margin).max(0.0)
        } else if alpha[t] >= c {
            (margin - 1.0).max(0.0)
        } else {
            (margin - 1.0).abs()
        };
        worst = worst.max(v);
    }
    worst
}

fn model_invariants(m: &SvmRbfModel) -> bool {
    m.dual_coef.iter().sum::<f64>().abs() <= 1e-9 && m.dual_coef.iter().all(|a| a.abs() > 0.0 && a.abs() <= m.c + 1e-12)
}

fn svm_correctness() -> Check {
    let mut worst_kkt = 0.0f64;
    let mut worst_gap = 0.0f64;
    let mut models_ok = true;
    let mut rng = rng_for(5, Stream::Fold, 0);
    for trial in 0..200 {
        let n = 2 + trial % 3;
        let x: Vec<Vec<f64>> = (0..n).map(|_| vec![rng.random::<f64>() * 2.0, rng.random::<f64>() * 2.0]).collect();
        let mut labels: Vec<Label> = (0..n).map(|_| if rng.random::<bool>() { Label::Positive } else { Label::Negative }).collect();
        labels[0] = Label::Positive;
        labels[1] = Label::Negative;
        let y: Vec<f64> = labels.iter().map(|l| l.sign()).collect();
        let c = [0.1, 1.0, 10.0][trial % 3];
        let gamma = [0.3, 1.0, 4.0][(trial / 3) % 3];
        let k = kernel_matrix(&x, gamma);
        let sol = solve_dual(&k, &y, c);
        worst_kkt = worst_kkt.max(kkt_violation(&k, &y, c, &sol.alpha, sol.bias));
        worst_gap = worst_gap.max((sol.dual_objective - brute_force_dual(&k, &y, c)).abs());
        models_ok &= train_svm_rbf(&x, &labels, c, gamma).map(|m| model_invariants(&m)).unwrap_or(false);
    }

    // a realistic problem: the full bundled dataset, normalized
    let data = bundled()?;
    let norm = fit_normalizer(&data.rows.iter().map(|r| r.features).collect::<Vec<_>>()).map_err(err)?;
    let x: Vec<Vec<f64>> = data.rows.iter().map(|r| norm.apply(&r.features).to_array().to_vec()).collect();
    let y: Vec<f64> = data.labels().iter().map(|l| l.sign()).collect();
    let k = kernel_matrix(&x, 1.0);
    let sol = solve_dual(&k, &y, 10.0);
    worst_kkt = worst_kkt.max(kkt_violation(&k, &y, 10.0, &sol.alpha, sol.bias));
    models_ok &= train_svm_rbf(&x, &data.labels(), 10.0, 1.0).map(|m| model_invariants(&m)).unwrap_or(false);

    let xor = vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0], vec![1.0, 0.0]];
    let xl = [Label::Negative, Label::Negative, Label::Positive, Label::Positive];
    let m = train_svm_rbf(&xor, &xl, 10.0, 1.0).map_err(err)?;
    let xor_acc = xor.iter().zip(&xl).filter(|(p, l)| classify_svm(&m, p).0 == **l).count() as f64 / 4.0;

    // the solver stops once the maximal violating pair is within tolerance
    let ok = worst_kkt <= KKT_TOLERANCE && worst_gap <= 1e-4 && models_ok && xor_acc == 1.0;
    Ok((
        ok,
        format!(
            "worst KKT violation {worst_kkt:.1e} (tol {KKT_TOLERANCE:.0e}), SMO vs brute-force objective {worst_gap:.1e} over 200 problems, model invariants {models_ok}, XOR training ACC {xor_acc}"
        ),
    ))
}

// 8 ----------------------------------------------------------------------

fn knn_oracle() -> Check {
    let data = bundled()?;
    let norm = fit_normalizer(&data.rows.iter().map(|r| r.features).collect::<Vec<_>>()).map_err(err)?;
    let x: Vec<Vec<f64>> = data.rows.iter().map(|r| norm.apply(&r.features).to_array().to_vec()).collect();
    let labels = data.labels();
    let mut rng = rng_for(8, Stream::Fold, 1);
    let mut mismatches = 0;
    let queries = 1000;
    for qi in 0..queries {
        let k = DEFAULT_K_VALUES[qi % DEFAULT_K_VALUES.len()];
        let model = KnnModel::new(k, x.clone(), labels.clone()).map_err(err)?;
        let q: Vec<f64> = if qi % 4 == 0 {
            // exactly on a training point, where ties are likeliest
            x[rng.random_range(0..x.len())].clone()
        } else {
            (0..x[0].len()).map(|_| rng.random::<f64>() * 1.2 - 0.1).collect()
        };
        let mut scan: Vec<(f64, usize)> = x
            .iter()
            .enumerate()
            .map(|(i, p)| (p.iter().zip(&q).map(|(a, b)| (a - b) * (a - b)).sum::<f64>(), i))
            .collect();
        scan.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let want: Vec<usize> = scan[..k].iter().map(|s| s.1).collect();
        let pos = want.iter().filter(|&&i| labels[i].is_positive()).count();
        let want_label = if 2 * pos >= k { Label::Positive } else { Label::Negative };
        if model.neighbours(&q) != want || classify_knn(&model, &q) != want_label {
            mismatches += 1;
        }
    }
    Ok((mismatches == 0, format!("{queries} queries, {mismatches} mismatches against the exhaustive scan")))
}

// 9 ----------------------------------------------------------------------

fn privacy() -> Check {
    let ctx = GeometryContext::default();
    let skeleton = ring_points(&RingConfig::default()).map_err(err)?;
    let mut ok = true;
    let mut parts = Vec::new();
    for orientation in [0.0, 0.3] {
        let scene = gun_shape_scene(&ctx, orientation).map_err(err)?;
        let ring = sample_ring_exact(&scene, &skeleton).map_err(err)?;
        let (sparse, dense) = reconstructions(&scene, &ring, 0.5).map_err(err)?;
        let s_ring = image_ssim(scene.grid(), &sparse).map_err(err)?;
        let s_dense = image_ssim(scene.grid(), &dense).map_err(err)?;
        ok &= s_ring <= 0.12 && s_dense >= 0.5;
        parts.push(format!("orientation {orientation}: ring SSIM {s_ring:.4} (<= 0.12), 50% low-pass SSIM {s_dense:.4} (>= 0.5)"));
    }
    Ok((ok, parts.join("; ")))
}

// 10 ---------------------------------------------------------------------

fn cli(dir: &Path, cfg: &Path, args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_ringfilter"))
        .arg("--config")
        .arg(cfg)
        .arg("--out")
        .arg(dir)
        .args(args)
        .output()
        .map_err(err)?;
    if !out.status.success() {
        return Err(format!("`{}` failed: {}", args.join(" "), String::from_utf8_lossy(&out.stderr)));
    }
    Ok(())
}

fn snapshot(dir: &Path) -> Result<BTreeMap<String, Vec<u8>>, String> {
    let mut files = BTreeMap::new();
    for e in std::fs::read_dir(dir).map_err(err)? {
        let p = e.map_err(err)?.path();
        if p.is_file() {
            files.insert(p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).map_err(err)?);
        }
    }
    Ok(files)
}

/// timing.json with the measured milliseconds blanked; everything else in
/// it must still match.
fn timing_shape(bytes: &[u8]) -> Result<serde_json::Value, String> {
    let mut v: serde_json::Value = serde_json::from_slice(bytes).map_err(err)?;
    v["total_compute_ms"] = serde_json::Value::Null;
    for s in v["stages"].as_array_mut().ok_or("timing.json has no stages")? {
        s["ms"] = serde_json::Value::Null;
    }
    Ok(v)
}

fn determinism() -> Check {
    let root = tempfile::TempDir::new().map_err(err)?;
    let cfg_path = root.path().join("config.json");
    let mut cfg: serde_json::Value = serde_json::from_str(DEMO).map_err(err)?;
    cfg["noise_sim"] = serde_json::json!({ "n_samples": 4000 });
    std::fs::write(&cfg_path, cfg.to_string()).map_err(err)?;

    let steps: [&[&str]; 10] = [
        &["scene"],
        &["measure", "--path", "oracle"],
        &["measure"],
        &["dataset"],
        &["train", "--classifier", "thr"],
        &["train", "--classifier", "knn"],
        &["train", "--classifier", "svm"],
        &["eval", "--iters", "40"],
        &["reconstruct"],
        &["report"],
    ];
    let mut runs = Vec::new();
    let mut oracle_rings = Vec::new();
    for r in 0..2 {
        let dir = root.path().join(format!("run{r}"));
        for step in steps {
            cli(&dir, &cfg_path, step)?;
            if step[..] == ["measure", "--path", "oracle"] {
                oracle_rings.push(std::fs::read(dir.join("ring.ringcsv")).map_err(err)?);
            }
        }
        cli(&dir, &cfg_path, &["ssim"])?;
        runs.push(snapshot(&dir)?);
    }
    let (a, b) = (&runs[0], &runs[1]);
    let mut differing = Vec::new();
    if a.keys().ne(b.keys()) {
        differing.push("file sets".to_string());
    }
    for (name, bytes) in a {
        let same = match (name.as_str(), b.get(name)) {
            (_, None) => false,
            ("timing.json", Some(other)) => timing_shape(bytes)? == timing_shape(other)?,
            (_, Some(other)) => bytes == other,
        };
        if !same {
            differing.push(name.clone());
        }
    }
    if oracle_rings[0] != oracle_rings[1] {
        differing.push("ring.ringcsv (oracle path)".into());
    }
    let ok = differing.is_empty();
    let detail = if ok {
        format!(
            "{} artifacts byte-identical across two runs of 11 commands, oracle ring too; timing.json identical apart from measured milliseconds",
            a.len()
        )
    } else {
        format!("outputs differ: {}", differing.join(", "))
    };
    Ok((ok, detail))
}

// 11 ---------------------------------------------------------------------

fn timing_budget() -> Check {
    let mut cfg = RunConfig::from_json(DEMO, None, None).map_err(err)?;
    cfg.timing.repetitions = 50;
    let data = bundled()?;
    let t = timing_report(&cfg, &data).map_err(err)?;
    let vis = t.stage_ms("visibility").ok_or("no visibility stage")?;
    let feat = t.stage_ms("features").ok_or("no features stage")?;

    println!("      {:<28} {:>10}", "stage", "time (ms)");
    println!("      {:<28} {:>10.2}", "data acquisition (simulated)", t.simulated_acquisition_ms);
    for s in &t.stages {
        println!("      {:<28} {:>10.4}", s.stage, s.ms);
    }
    println!("      {:<28} {:>10.4}", "total compute", t.total_compute_ms);

    let within = vis <= 10.0 && feat <= 1.0;
    let hard_fail = vis > 100.0 || feat > 10.0;
    let verdict = if within {
        "within budget"
    } else if hard_fail {
        "over 10x budget"
    } else {
        "over budget but under 10x (soft)"
    };
    Ok((!hard_fail, format!("visibility {vis:.3} ms (<= 10), features {feat:.4} ms (<= 1): {verdict}")))
}

fn main() {
    let criteria: [Criterion; 11] = [
        (1, "ring geometry", ring_geometry, 1),
        (2, "Fourier oracle equivalence", fourier_oracle, 30),
        (3, "noise-illumination correlation oracle", van_cittert_zernike, 120),
        (4, "edge orthogonality", edge_orthogonality, 30),
        (5, "metric identities", metric_identities, 1),
        (6, "classifier separation ordering", classifier_ordering, 600),
        (7, "SVM correctness", svm_correctness, 60),
        (8, "KNN oracle equivalence", knn_oracle, 30),
        (9, "privacy regression", privacy, 60),
        (10, "determinism", determinism, 60),
        (11, "timing budget", timing_budget, 60),
    ];
    let mut failures = 0;
    for (id, name, check, budget_s) in criteria {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let over = took > Duration::from_secs(budget_s);
        let (pass, detail) = match result {
            Ok((p, d)) => (p && !over, d),
            Err(e) => (false, format!("error: {e}")),
        };
        let time_note = if over {
            format!("{:.2} s, over the {budget_s} s budget", took.as_secs_f64())
        } else {
            format!("{:.2} s", took.as_secs_f64())
        };
        println!("{} criterion {id:>2} {name} [{time_note}]: {detail}", if pass { "PASS" } else { "FAIL" });
        failures += usize::from(!pass);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
