//! Static array versus rotating pair: how many distinct uv points each
//! gives, and the rotation schedule that keeps every encoder angle.

use ringfilter::dynarray::{ring_points, rotation_schedule, static_samples, ArrayLayout, RingConfig};
use ringfilter::scene::GeometryContext;

fn main() -> ringfilter::Result<()> {
    let lambda = GeometryContext::default().wavelength_m();

    // uniform line of 6 and a minimum-redundancy line of 4 (marks 0 1 4 6)
    for (name, marks) in [("uniform x6", vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0]), ("sparse 0-1-4-6", vec![0.0, 1.0, 4.0, 6.0])] {
        let layout = ArrayLayout::new(marks.iter().map(|m| (m * 10.0 * lambda, 0.0)).collect(), lambda)?;
        let s = static_samples(&layout);
        println!("{name:>15}: {} pairs, {} unique, {} redundant", s.total(), s.unique, s.redundant);
    }

    let cfg = RingConfig::default();
    let ring = ring_points(&cfg)?;
    let worst = ring
        .entries()
        .iter()
        .map(|e| ((e.u * e.u + e.v * e.v).sqrt() - e.baseline).abs() / e.baseline)
        .fold(0.0, f64::max);
    println!(
        "rotating pair: {} uv points on radius {} (worst radial error {worst:.1e})",
        ring.len(),
        cfg.baselines_lambda[0]
    );
    for e in ring.entries().iter().step_by(50) {
        println!("  k={:>3} gamma={:>6.1} deg  u={:+8.3}  v={:+8.3}", e.k, e.gamma.to_degrees(), e.u, e.v);
    }

    for rate in [cfg.rotation_rate, 4.0] {
        let s = rotation_schedule(&RingConfig {
            rotation_rate: rate,
            ..cfg.clone()
        })?;
        println!(
            "rate {rate:.1} rev/s: ring time {:.0} ms, ceiling {:.2} rev/s -> {}",
            s.t_ring * 1e3,
            s.gamma_ring,
            if s.feasible { "every angle visited" } else { "angles skipped" }
        );
    }

    let two = ring_points(&RingConfig {
        baselines_lambda: vec![40.0, 77.0],
        ..cfg
    })?;
    println!("two baselines: {} samples", two.len());
    Ok(())
}
