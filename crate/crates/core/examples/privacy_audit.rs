//! Can an image be recovered from one ring of Fourier samples?
//!
//! Reconstructs the gun-shape scene from the default ring and from a dense
//! low-pass mask covering half the uv-grid, and scores both against the
//! original with SSIM.

use ringfilter::dynarray::{ring_points, sample_ring_from_visibility, RingConfig};
use ringfilter::evaluate::ssim;
use ringfilter::scene::{gun_shape_scene, GeometryContext};
use ringfilter::visibility::{forward_visibility, inverse_reconstruct, low_frequency_mask, reconstruct_from_ring};

fn main() -> ringfilter::Result<()> {
    let scene = gun_shape_scene(&GeometryContext::default(), 0.3)?;
    let reference = scene.grid().clipped_unit();
    let vis = forward_visibility(&scene)?;

    let ring = sample_ring_from_visibility(&ring_points(&RingConfig::default())?, &vis)?;
    let from_ring = reconstruct_from_ring(&ring, vis.x_axis, vis.y_axis)?;
    let ring_ssim = ssim(&reference, &from_ring.image.clipped_unit())?;

    let dense = low_frequency_mask(&vis, 0.5)?;
    let from_dense = inverse_reconstruct(&dense)?;
    let dense_ssim = ssim(&reference, &from_dense.image.clipped_unit())?;

    println!("ring samples      {:>6}   coverage {:.5}   SSIM {ring_ssim:.4}", ring.len(), 
        (ring.len() as f64) / vis.values.len() as f64);
    println!("low-pass mask     {:>6}   coverage {:.5}   SSIM {dense_ssim:.4}", dense.mask_count(), dense.coverage());
    Ok(())
}
