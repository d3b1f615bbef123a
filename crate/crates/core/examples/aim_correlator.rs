//! Noise-illumination simulator versus the analytic visibility of a
//! two-point scene, plus the single-transmitter control in which
//! scatterer cross terms survive the correlation.

use ringfilter::aimsim::{pearson_real, NoiseSimConfig, Scatterer, ScattererSet, Simulator};
use ringfilter::dynarray::{ring_points, RingConfig};
use num_complex::Complex64;

fn main() -> ringfilter::Result<()> {
    let scatterers = ScattererSet::new(vec![
        Scatterer { l: 0.020, m: 0.010, reflectivity: 1.0 },
        Scatterer { l: -0.015, m: -0.025, reflectivity: 0.6 },
    ])?;
    // coarser ring and shorter dwells than the defaults, to run in seconds
    let ring = RingConfig {
        step: 1.8f64.to_radians(),
        ..RingConfig::default()
    };
    let analytic: Vec<Complex64> = ring_points(&ring)?
        .entries()
        .iter()
        .map(|e| scatterers.visibility_at(e.u, e.v))
        .collect();

    let cfg = NoiseSimConfig {
        n_samples: 20_000,
        seed: 11,
        ..NoiseSimConfig::default()
    };
    let many = Simulator::new(cfg.clone(), scatterers.clone())?.measure_ring(&ring)?;
    let m: Vec<Complex64> = many.values().collect();
    println!(
        "{} emitters: corr(re) {:.4}, corr(im) {:.4}",
        cfg.tx_positions.len(),
        pearson_real(&m, &analytic)?,
        pearson_real(&im_as_re(&m), &im_as_re(&analytic))?
    );

    let single = NoiseSimConfig {
        tx_positions: vec![(0.0, 0.30)],
        ..cfg
    };
    let one = Simulator::new_unvalidated(single, scatterers)?.measure_ring(&ring)?;
    let o: Vec<Complex64> = one.values().collect();
    println!(
        "1 emitter:   corr(re) {:.4}, corr(im) {:.4}",
        pearson_real(&o, &analytic)?,
        pearson_real(&im_as_re(&o), &im_as_re(&analytic))?
    );
    Ok(())
}

fn im_as_re(z: &[Complex64]) -> Vec<Complex64> {
    z.iter().map(|v| Complex64::new(v.im, 0.0)).collect()
}
