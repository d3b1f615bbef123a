//! The eleven ring statistics for a person with and without a gun-shape
//! target, raw and after min-max normalization.

use ringfilter::dynarray::{ring_points, RingConfig};
use ringfilter::features::{extract, fit_normalizer, FEATURE_NAMES};
use ringfilter::scene::{gun_shape, make_scene, torso_phantom, GeometryContext, GridSpec, METAL_AMPLITUDE, PHANTOM_AMPLITUDE};
use ringfilter::visibility::sample_ring_exact;

fn main() -> ringfilter::Result<()> {
    let ctx = GeometryContext::default();
    let skeleton = ring_points(&RingConfig::default())?;
    let torso = torso_phantom(&ctx, (0.0, 0.0), 0.36, 0.52, PHANTOM_AMPLITUDE)?;
    let gun = gun_shape(&ctx, (0.01, -0.02), 0.3, METAL_AMPLITUDE)?;

    let person = sample_ring_exact(&make_scene(&GridSpec::default(), std::slice::from_ref(&torso))?, &skeleton)?;
    let carrying = sample_ring_exact(&make_scene(&GridSpec::default(), &[torso, gun])?, &skeleton)?;
    let a = extract(&person)?;
    let b = extract(&carrying)?;

    let norm = fit_normalizer(&[a, b])?;
    let (na, nb) = (norm.apply(&a), norm.apply(&b));
    println!("{:>18} {:>12} {:>12}", "feature", "person", "with gun");
    for (i, name) in FEATURE_NAMES.iter().enumerate() {
        println!("{name:>18} {:>12.4e} {:>12.4e}", a.to_array()[i], b.to_array()[i]);
    }
    println!(
        "normalized magnitude: person {:.3}, with gun {:.3}",
        na.magnitude.unwrap_or(f64::NAN),
        nb.magnitude.unwrap_or(f64::NAN)
    );
    Ok(())
}
