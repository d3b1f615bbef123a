//! Forward transform of a scene, Parseval's identity, the full-mask round
//! trip and the point spread function of the ring sampling pattern.

use ringfilter::dynarray::{ring_points, RingConfig};
use ringfilter::scene::{gun_shape_scene, GeometryContext};
use ringfilter::visibility::{forward_visibility, grid_ring_samples, inverse_reconstruct, psf, SampledVisibility};

fn main() -> ringfilter::Result<()> {
    let scene = gun_shape_scene(&GeometryContext::default(), 0.0)?;
    let g = scene.grid();
    let vis = forward_visibility(&scene)?;
    println!(
        "uv grid {}x{}, du = {:.3} wavelengths, |u| <= {:.1}",
        vis.rows(),
        vis.cols(),
        vis.x_axis.step,
        vis.x_axis.max()
    );

    let e_img: f64 = g.values.iter().map(|x| x * x).sum::<f64>() * g.cell_area();
    let e_vis: f64 = vis.values.iter().map(|z| z.norm_sqr()).sum::<f64>() * vis.cell_area();
    println!("energy: image {e_img:.6e}, visibility {e_vis:.6e}, rel diff {:.2e}", (e_img - e_vis).abs() / e_img);

    let back = inverse_reconstruct(&SampledVisibility::full(vis.clone()))?;
    let err = back
        .image
        .values
        .iter()
        .zip(&g.values)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!("full-mask round trip: max error {:.2e} of peak {:.1}", err, g.max_value());

    let ring = ring_points(&RingConfig::default())?;
    let mask = grid_ring_samples(&ring, vis.x_axis, vis.y_axis)?.hermitian_complete();
    let p = psf(&mask)?;
    let (rows, cols) = (p.image.rows(), p.image.cols());
    println!(
        "ring mask: {} of {} cells ({:.3}%), PSF imaginary residual {:.1e}",
        mask.mask_count(),
        vis.values.len(),
        100.0 * mask.coverage(),
        p.imag_residual
    );
    print!("PSF along +l from centre:");
    for c in (cols / 2..cols / 2 + 12).step_by(2) {
        print!(" {:+.3}", p.image.get(rows / 2, c));
    }
    println!();
    Ok(())
}
