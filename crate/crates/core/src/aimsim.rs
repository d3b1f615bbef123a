//! Time-domain model of active incoherent illumination.
//!
//! Noise transmitters illuminate a set of far-field point scatterers and two
//! receivers record the sum of the scattered noise. Correlating the two
//! receiver series estimates one visibility sample. The model is narrowband:
//! geometric delays appear only as carrier phase shifts.
//!
//! A transmitter at `p_t` reaches a receiver at `p_r` through a scatterer in
//! direction `d = (l, m)` with phase `exp(j k (p_t + p_r) . d)`. Averaged over
//! many transmitters at diverse positions, cross terms between different
//! scatterers cancel and
//!
//! ```text
//! E[y1 conj(y2)] = sum_s rho_s exp(j 2 pi (p1 - p2) / lambda . d_s)
//! ```
//!
//! which is the visibility at baseline `(p1 - p2) / lambda`. A single
//! transmitter leaves the cross terms in place.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynarray::{RingConfig, RingSample, RingSampleSet};
use crate::error::{Error, Result};
use crate::scene::{SceneIntensity, SPEED_OF_LIGHT};
use crate::seed::{rng_for, Stream};

/// Half-length of the windowed-sinc noise filter; the filter has `2 M + 1` taps.
pub const FILTER_HALF_TAPS: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseSimConfig {
    /// Transmitter positions in the aperture plane, meters.
    pub tx_positions: Vec<(f64, f64)>,
    /// Receiver positions at encoder angle zero, meters.
    pub rx_positions: Vec<(f64, f64)>,
    pub carrier: f64,
    pub noise_bandwidth: f64,
    pub sample_rate: f64,
    pub n_samples: usize,
    pub snr_db: f64,
    pub seed: u64,
    /// Extra phase applied to receiver 2, radians.
    pub rx_phase_offset: f64,
}

/// `n` emitters on a golden-angle spiral filling the annulus `[r_in, r_out]`.
pub fn spiral_emitters(n: usize, r_in: f64, r_out: f64) -> Vec<(f64, f64)> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let frac = (i as f64 + 0.5) / n as f64;
            let r = (r_in * r_in + (r_out * r_out - r_in * r_in) * frac).sqrt();
            let a = i as f64 * golden;
            (r * a.cos(), r * a.sin())
        })
        .collect()
}

impl Default for NoiseSimConfig {
    /// 77-wavelength receive pair at 75 GHz lit by 16 emitters spread over
    /// an annulus outside the receive baseline.
    fn default() -> Self {
        let carrier = 75e9;
        let half = 77.0 * SPEED_OF_LIGHT / carrier / 2.0;
        NoiseSimConfig {
            tx_positions: spiral_emitters(16, 0.16, 0.40),
            rx_positions: vec![(0.0, half), (0.0, -half)],
            carrier,
            noise_bandwidth: 1e9,
            sample_rate: 2e9,
            n_samples: 10_000,
            snr_db: 30.0,
            seed: 0,
            rx_phase_offset: 0.0,
        }
    }
}

impl NoiseSimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.tx_positions.len() < 2 {
            return Err(Error::Config(format!(
                "at least 2 transmitters are required, got {}",
                self.tx_positions.len()
            )));
        }
        self.validate_common()?;
        let half_baseline = self.rx_half_baseline();
        for (i, p) in self.tx_positions.iter().enumerate() {
            let r = (p.0 * p.0 + p.1 * p.1).sqrt();
            if r <= half_baseline {
                return Err(Error::Config(format!(
                    "transmitter {i} at radius {r:.4} m lies inside the receive baseline (half-length {half_baseline:.4} m)"
                )));
            }
        }
        Ok(())
    }

    fn validate_common(&self) -> Result<()> {
        if self.rx_positions.len() != 2 {
            return Err(Error::Config(format!(
                "exactly 2 receivers are required, got {}",
                self.rx_positions.len()
            )));
        }
        if self.rx_positions[0] == self.rx_positions[1] {
            return Err(Error::Config("receivers must not coincide".into()));
        }
        let pos_ok = |p: &(f64, f64)| p.0.is_finite() && p.1.is_finite();
        if !self.tx_positions.iter().chain(&self.rx_positions).all(pos_ok) {
            return Err(Error::Config("antenna positions must be finite".into()));
        }
        if !(self.carrier > 0.0 && self.carrier.is_finite()) {
            return Err(Error::Config(format!("carrier must be positive, got {}", self.carrier)));
        }
        if !(self.noise_bandwidth > 0.0) {
            return Err(Error::Config(format!(
                "noise bandwidth must be positive, got {}",
                self.noise_bandwidth
            )));
        }
        if !(self.sample_rate >= 2.0 * self.noise_bandwidth) {
            return Err(Error::Config(format!(
                "sample rate {} is below twice the noise bandwidth {}",
                self.sample_rate, self.noise_bandwidth
            )));
        }
        if self.n_samples < 1 {
            return Err(Error::Config("n_samples must be at least 1".into()));
        }
        if !self.snr_db.is_finite() || !self.rx_phase_offset.is_finite() {
            return Err(Error::Config("snr_db and rx_phase_offset must be finite".into()));
        }
        Ok(())
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier
    }

    fn rx_half_baseline(&self) -> f64 {
        let (a, b) = (self.rx_positions[0], self.rx_positions[1]);
        0.5 * ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
    }

    /// Receive baseline in wavelengths.
    pub fn baseline_lambda(&self) -> f64 {
        2.0 * self.rx_half_baseline() / self.wavelength()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scatterer {
    pub l: f64,
    pub m: f64,
    pub reflectivity: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScattererSet {
    items: Vec<Scatterer>,
}

impl ScattererSet {
    pub fn new(items: Vec<Scatterer>) -> Result<Self> {
        for (i, s) in items.iter().enumerate() {
            if !(s.l.abs() <= 1.0 && s.m.abs() <= 1.0) {
                return Err(Error::Domain(format!(
                    "scatterer {i} at ({}, {}) is outside [-1, 1]",
                    s.l, s.m
                )));
            }
            if !(s.reflectivity >= 0.0 && s.reflectivity.is_finite()) {
                return Err(Error::Domain(format!(
                    "scatterer {i} reflectivity must be finite and non-negative, got {}",
                    s.reflectivity
                )));
            }
        }
        Ok(ScattererSet { items })
    }

    pub fn empty() -> Self {
        ScattererSet::default()
    }

    /// One scatterer per non-zero pixel, weighted by intensity times pixel
    /// area so that the correlator output matches the gridded transform.
    pub fn from_scene(scene: &SceneIntensity) -> Self {
        let g = scene.grid();
        let area = g.cell_area();
        let mut items = Vec::with_capacity(scene.nonzero_count());
        for r in 0..g.rows() {
            for c in 0..g.cols() {
                let v = *g.get(r, c);
                if v > 0.0 {
                    items.push(Scatterer {
                        l: g.x_axis.coord(c),
                        m: g.y_axis.coord(r),
                        reflectivity: v * area,
                    });
                }
            }
        }
        ScattererSet { items }
    }

    pub fn items(&self) -> &[Scatterer] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Exact visibility of the discrete scatterers at `(u, v)`.
    pub fn visibility_at(&self, u: f64, v: f64) -> Complex64 {
        self.items
            .iter()
            .map(|s| Complex64::from_polar(s.reflectivity, std::f64::consts::TAU * (u * s.l + v * s.m)))
            .sum()
    }
}

/// Hamming-windowed sinc low-pass with unit energy, so white noise of unit
/// power comes out with unit power.
pub fn noise_filter(noise_bandwidth: f64, sample_rate: f64) -> Vec<f64> {
    // complex baseband noise of bandwidth B occupies [-B/2, B/2]
    let fc = 0.5 * noise_bandwidth / sample_rate;
    let m = FILTER_HALF_TAPS as f64;
    let mut h: Vec<f64> = (0..=2 * FILTER_HALF_TAPS)
        .map(|i| {
            let t = i as f64 - m;
            let x = 2.0 * fc * t;
            let sinc = if t == 0.0 {
                1.0
            } else {
                (std::f64::consts::PI * x).sin() / (std::f64::consts::PI * x)
            };
            let w = 0.54 + 0.46 * (std::f64::consts::PI * t / m).cos();
            2.0 * fc * sinc * w
        })
        .collect();
    let energy: f64 = h.iter().map(|x| x * x).sum();
    let s = energy.sqrt();
    for x in &mut h {
        *x /= s;
    }
    h
}

/// Two receivers' complex baseband series for one dwell.
#[derive(Debug, Clone, PartialEq)]
pub struct DwellSeries {
    pub rx1: Vec<Complex64>,
    pub rx2: Vec<Complex64>,
}

#[derive(Debug, Clone)]
pub struct Simulator {
    cfg: NoiseSimConfig,
    scatterers: ScattererSet,
    filter: Vec<f64>,
}

fn rotate(p: (f64, f64), gamma: f64) -> (f64, f64) {
    let (s, c) = gamma.sin_cos();
    (p.0 * c + p.1 * s, -p.0 * s + p.1 * c)
}

fn complex_normal<R: Rng>(rng: &mut R, power: f64) -> Complex64 {
    let sigma = (0.5 * power).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(sigma * re, sigma * im)
}

impl Simulator {
    pub fn new(cfg: NoiseSimConfig, scatterers: ScattererSet) -> Result<Self> {
        cfg.validate()?;
        Ok(Self::build(cfg, scatterers))
    }

    /// Skips the transmitter-count and placement checks. Used for the
    /// single-transmitter control experiment, which is expected to fail.
    pub fn new_unvalidated(cfg: NoiseSimConfig, scatterers: ScattererSet) -> Result<Self> {
        if cfg.tx_positions.is_empty() {
            return Err(Error::Config("at least 1 transmitter is required".into()));
        }
        cfg.validate_common()?;
        Ok(Self::build(cfg, scatterers))
    }

    fn build(cfg: NoiseSimConfig, scatterers: ScattererSet) -> Self {
        let filter = noise_filter(cfg.noise_bandwidth, cfg.sample_rate);
        Simulator {
            cfg,
            scatterers,
            filter,
        }
    }

    pub fn config(&self) -> &NoiseSimConfig {
        &self.cfg
    }

    /// Path gains `G[r][t] = sum_s sqrt(rho_s) exp(j k (p_t + p_r) . d_s)` with the
    /// whole array rotated by `gamma`.
    fn gains(&self, gamma: f64) -> [Vec<Complex64>; 2] {
        let k = std::f64::consts::TAU / self.cfg.wavelength();
        let rx: Vec<(f64, f64)> = self.cfg.rx_positions.iter().map(|p| rotate(*p, gamma)).collect();
        let tx: Vec<(f64, f64)> = self.cfg.tx_positions.iter().map(|p| rotate(*p, gamma)).collect();
        let mut out = [vec![Complex64::new(0.0, 0.0); tx.len()], vec![Complex64::new(0.0, 0.0); tx.len()]];
        for (r, pr) in rx.iter().enumerate() {
            for (t, pt) in tx.iter().enumerate() {
                out[r][t] = self
                    .scatterers
                    .items
                    .iter()
                    .map(|s| {
                        let phase = k * ((pt.0 + pr.0) * s.l + (pt.1 + pr.1) * s.m);
                        Complex64::from_polar(s.reflectivity.sqrt(), phase)
                    })
                    .sum();
            }
        }
        let offset = Complex64::from_polar(1.0, self.cfg.rx_phase_offset);
        for g in out[1].iter_mut() {
            *g *= offset;
        }
        out
    }

    /// Simulate dwell `k` at encoder angle `gamma`. The random stream depends
    /// only on the master seed and `k`.
    pub fn simulate_dwell(&self, k: usize, gamma: f64) -> DwellSeries {
        let mut rng = rng_for(self.cfg.seed, Stream::Dwell, k as u64);
        let n = self.cfg.n_samples;
        let n_tx = self.cfg.tx_positions.len();
        let taps = self.filter.len();
        let [g1, g2] = self.gains(gamma);
        // total illumination power is 1, split evenly across transmitters
        let tx_power = 1.0 / n_tx as f64;

        // Filtering is linear and shared by all transmitters, so mixing the
        // white sources first and filtering each receiver once is exact.
        let mut white1 = Vec::with_capacity(n + taps - 1);
        let mut white2 = Vec::with_capacity(n + taps - 1);
        let mut w = vec![Complex64::new(0.0, 0.0); n_tx];
        for _ in 0..n + taps - 1 {
            for x in w.iter_mut() {
                *x = complex_normal(&mut rng, tx_power);
            }
            let mut a = Complex64::new(0.0, 0.0);
            let mut b = Complex64::new(0.0, 0.0);
            for t in 0..n_tx {
                a += g1[t] * w[t];
                b += g2[t] * w[t];
            }
            white1.push(a);
            white2.push(b);
        }
        let mut rx1 = fir(&white1, &self.filter, n);
        let mut rx2 = fir(&white2, &self.filter, n);

        let snr = 10f64.powf(self.cfg.snr_db / 10.0);
        for series in [&mut rx1, &mut rx2] {
            let p = series.iter().map(|z| z.norm_sqr()).sum::<f64>() / n as f64;
            let signal = if p > 0.0 { p } else { 1.0 };
            let noise = signal / snr;
            for z in series.iter_mut() {
                *z += complex_normal(&mut rng, noise);
            }
        }
        DwellSeries { rx1, rx2 }
    }

    /// One correlated visibility sample per ring angle. Dwells run in
    /// parallel; output is identical to a serial run.
    pub fn measure_ring(&self, ring: &RingConfig) -> Result<RingSampleSet> {
        ring.validate()?;
        let k_max = ring.samples_per_ring();
        let baseline = self.cfg.baseline_lambda();
        let (p1, p2) = (self.cfg.rx_positions[0], self.cfg.rx_positions[1]);
        let lambda = self.cfg.wavelength();
        let values: Vec<Result<Complex64>> = (0..k_max)
            .into_par_iter()
            .map(|k| {
                let d = self.simulate_dwell(k, ring.gamma(k));
                correlate(&d.rx1, &d.rx2)
            })
            .collect();
        let mut entries = Vec::with_capacity(k_max);
        for (k, value) in values.into_iter().enumerate() {
            let gamma = ring.gamma(k);
            let b = rotate(((p1.0 - p2.0) / lambda, (p1.1 - p2.1) / lambda), gamma);
            entries.push(RingSample {
                k,
                gamma,
                u: b.0,
                v: b.1,
                value: value?,
                baseline,
            });
        }
        RingSampleSet::from_entries(entries)
    }
}

fn fir(x: &[Complex64], h: &[f64], n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|i| {
            let window = &x[i..i + h.len()];
            let mut acc = Complex64::new(0.0, 0.0);
            for (a, &b) in window.iter().zip(h.iter().rev()) {
                acc += a * b;
            }
            acc
        })
        .collect()
}

/// Zero-lag cross-correlation `(1/n) sum rx1[i] conj(rx2[i])`.
pub fn correlate(rx1: &[Complex64], rx2: &[Complex64]) -> Result<Complex64> {
    if rx1.len() != rx2.len() || rx1.is_empty() {
        return Err(Error::Precondition(format!(
            "correlation needs equal non-empty lengths, got {} and {}",
            rx1.len(),
            rx2.len()
        )));
    }
    let s: Complex64 = rx1.iter().zip(rx2).map(|(a, b)| a * b.conj()).sum();
    Ok(s / rx1.len() as f64)
}

/// Normalized cross-correlation magnitude `|<x y*>| / sqrt(<|x|^2> <|y|^2>)`.
pub fn normalized_correlation(rx1: &[Complex64], rx2: &[Complex64]) -> Result<f64> {
    let c = correlate(rx1, rx2)?;
    let p1 = correlate(rx1, rx1)?.re;
    let p2 = correlate(rx2, rx2)?.re;
    if p1 <= 0.0 || p2 <= 0.0 {
        return Err(Error::Numeric("zero-power series".into()));
    }
    Ok(c.norm() / (p1 * p2).sqrt())
}

/// Pearson correlation between the real parts of two equally long sample lists.
pub fn pearson_real(a: &[Complex64], b: &[Complex64]) -> Result<f64> {
    if a.len() != b.len() || a.len() < 2 {
        return Err(Error::Precondition(format!(
            "need two equal lists of at least 2 values, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    let n = a.len() as f64;
    let ma = a.iter().map(|z| z.re).sum::<f64>() / n;
    let mb = b.iter().map(|z| z.re).sum::<f64>() / n;
    let mut sab = 0.0;
    let mut saa = 0.0;
    let mut sbb = 0.0;
    for (x, y) in a.iter().zip(b) {
        let (da, db) = (x.re - ma, y.re - mb);
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if saa == 0.0 || sbb == 0.0 {
        return Err(Error::Numeric("constant input has no correlation".into()));
    }
    Ok(sab / (saa * sbb).sqrt())
}

/// RMS error of `measured` against `reference` after the best complex
/// scale fit, relative to the reference RMS.
pub fn normalized_rms_error(measured: &[Complex64], reference: &[Complex64]) -> Result<f64> {
    if measured.len() != reference.len() || measured.is_empty() {
        return Err(Error::Precondition("lists must be equal and non-empty".into()));
    }
    let rr: f64 = reference.iter().map(|z| z.norm_sqr()).sum();
    if rr == 0.0 {
        return Err(Error::Numeric("reference is identically zero".into()));
    }
    let num: Complex64 = reference.iter().zip(measured).map(|(r, m)| r.conj() * m).sum();
    let alpha = num / rr;
    let err: f64 = reference
        .iter()
        .zip(measured)
        .map(|(r, m)| (m - alpha * r).norm_sqr())
        .sum();
    let mm: f64 = measured.iter().map(|z| z.norm_sqr()).sum();
    // error as a fraction of the measured energy so scale cannot hide it
    if mm == 0.0 {
        return Ok(1.0);
    }
    Ok((err / mm).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn short(n: usize) -> NoiseSimConfig {
        NoiseSimConfig {
            n_samples: n,
            ..NoiseSimConfig::default()
        }
    }

    fn point(l: f64, m: f64, r: f64) -> ScattererSet {
        ScattererSet::new(vec![Scatterer { l, m, reflectivity: r }]).unwrap()
    }

    #[test]
    fn default_config_is_valid_and_77_lambda() {
        let c = NoiseSimConfig::default();
        c.validate().unwrap();
        assert!((c.baseline_lambda() - 77.0).abs() < 1e-9);
    }

    #[test]
    fn config_invariants() {
        let one_tx = NoiseSimConfig {
            tx_positions: vec![(0.0, 0.4)],
            ..NoiseSimConfig::default()
        };
        assert!(matches!(one_tx.validate(), Err(Error::Config(_))));
        let slow = NoiseSimConfig {
            sample_rate: 1e9,
            ..NoiseSimConfig::default()
        };
        assert!(slow.validate().is_err());
        let three_rx = NoiseSimConfig {
            rx_positions: vec![(0.0, 0.1), (0.0, -0.1), (0.1, 0.0)],
            ..NoiseSimConfig::default()
        };
        assert!(three_rx.validate().is_err());
        assert!(short(0).validate().is_err());
    }

    #[test]
    fn filter_has_unit_energy() {
        let h = noise_filter(1e9, 2e9);
        assert_eq!(h.len(), 2 * FILTER_HALF_TAPS + 1);
        let e: f64 = h.iter().map(|x| x * x).sum();
        assert!((e - 1.0).abs() < 1e-12);
    }

    #[test]
    fn correlate_examples() {
        let a: Vec<Complex64> = (0..100).map(|i| Complex64::from_polar(1.0, i as f64 * 0.37)).collect();
        let self_c = correlate(&a, &a).unwrap();
        assert!((self_c.re - 1.0).abs() < 1e-12 && self_c.im.abs() < 1e-12);
        let phi = 0.7;
        let b: Vec<Complex64> = a.iter().map(|z| z * Complex64::from_polar(1.0, phi)).collect();
        assert!((correlate(&a, &b).unwrap().arg() + phi).abs() < 1e-12);
        assert!(correlate(&a, &b[..10]).is_err());
    }

    #[test]
    fn independent_noise_correlation_is_small() {
        let mut hits = 0;
        for seed in 0..40u64 {
            let mut rng = rng_for(seed, Stream::Dwell, 99);
            let a: Vec<Complex64> = (0..10_000).map(|_| complex_normal(&mut rng, 1.0)).collect();
            let b: Vec<Complex64> = (0..10_000).map(|_| complex_normal(&mut rng, 1.0)).collect();
            if correlate(&a, &b).unwrap().norm() <= 0.03 {
                hits += 1;
            }
        }
        assert!(hits as f64 >= 0.95 * 40.0);
    }

    #[test]
    fn no_scatterers_gives_uncorrelated_receivers() {
        let n = 20_000;
        let sim = Simulator::new(short(n), ScattererSet::empty()).unwrap();
        let d = sim.simulate_dwell(0, 0.0);
        // only independent receiver noise is left
        assert!(normalized_correlation(&d.rx1, &d.rx2).unwrap() <= 3.0 / (n as f64).sqrt());
    }

    #[test]
    fn broadside_point_has_zero_phase() {
        let sim = Simulator::new(short(100_000), point(0.0, 0.0, 1.0)).unwrap();
        let d = sim.simulate_dwell(3, 0.4);
        let c = correlate(&d.rx1, &d.rx2).unwrap();
        assert!(c.arg().abs() < 0.05, "phase {}", c.arg());
        assert!((c.norm() - 1.0).abs() < 0.05);
    }

    #[test]
    fn correlation_linear_in_reflectivity() {
        let a = Simulator::new(short(100_000), point(0.02, -0.01, 1.0)).unwrap();
        let b = Simulator::new(short(100_000), point(0.02, -0.01, 2.0)).unwrap();
        let ca = correlate(&a.simulate_dwell(0, 0.0).rx1, &a.simulate_dwell(0, 0.0).rx2).unwrap();
        let db = b.simulate_dwell(0, 0.0);
        let cb = correlate(&db.rx1, &db.rx2).unwrap();
        let ratio = cb.norm() / ca.norm();
        assert!((ratio - 2.0).abs() < 0.1, "ratio {ratio}");
    }

    #[test]
    fn broadside_ring_is_flat() {
        let sim = Simulator::new(short(20_000), point(0.0, 0.0, 1.0)).unwrap();
        let ring = RingConfig {
            step: 9f64.to_radians(),
            ..RingConfig::default()
        };
        let s = sim.measure_ring(&ring).unwrap();
        assert_eq!(s.len(), 20);
        for e in s.entries() {
            assert!((e.value - Complex64::new(1.0, 0.0)).norm() < 0.1, "{:?}", e.value);
            assert!(((e.u * e.u + e.v * e.v).sqrt() - 77.0).abs() < 1e-9 * 77.0);
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let sim = Simulator::new(short(2_000), point(0.05, 0.0, 1.0)).unwrap();
        assert_eq!(sim.simulate_dwell(5, 0.3), sim.simulate_dwell(5, 0.3));
        assert_ne!(sim.simulate_dwell(5, 0.3), sim.simulate_dwell(6, 0.3));
    }

    #[test]
    fn pearson_and_rms_basics() {
        let a: Vec<Complex64> = (0..50).map(|i| Complex64::new((i as f64).sin(), 0.0)).collect();
        let b: Vec<Complex64> = a.iter().map(|z| z * 3.0).collect();
        assert!((pearson_real(&a, &b).unwrap() - 1.0).abs() < 1e-12);
        assert!(normalized_rms_error(&b, &a).unwrap() < 1e-12);
    }
}
