//! Rasterize a torso phantom with a gun-shape target and print a coarse
//! ASCII view of the intensity map.

use ringfilter::scene::{gun_shape, make_scene, torso_phantom, GeometryContext, GridSpec, METAL_AMPLITUDE, PHANTOM_AMPLITUDE};

fn main() -> ringfilter::Result<()> {
    let ctx = GeometryContext::default();
    println!(
        "range {:.2} m, carrier {:.1} GHz, wavelength {:.3} mm",
        ctx.range_m(),
        ctx.frequency_hz() / 1e9,
        ctx.wavelength_m() * 1e3
    );

    let spec = GridSpec::default();
    let shapes = [
        torso_phantom(&ctx, (0.0, 0.0), 0.36, 0.52, PHANTOM_AMPLITUDE)?,
        gun_shape(&ctx, (0.01, -0.02), 0.3, METAL_AMPLITUDE)?,
    ];
    let scene = make_scene(&spec, &shapes)?;
    let g = scene.grid();
    println!(
        "{}x{} pixels, {} non-zero, peak {:.1}, integrated {:.4e}",
        g.rows(),
        g.cols(),
        scene.nonzero_count(),
        g.max_value(),
        g.sum() * g.cell_area()
    );

    // 4x4 pixel blocks, top row = largest m
    let ramp = [' ', '.', ':', '*', '#'];
    let b = 4;
    let peak = g.max_value();
    for br in (0..g.rows() / b).rev().step_by(2) {
        let line: String = (0..g.cols() / b)
            .map(|bc| {
                let mut m = 0.0f64;
                for r in br * b..(br + 1) * b {
                    for c in bc * b..(bc + 1) * b {
                        m = m.max(*g.get(r, c));
                    }
                }
                ramp[((m / peak) * (ramp.len() - 1) as f64).round() as usize]
            })
            .collect();
        if line.trim().is_empty() {
            continue;
        }
        println!("|{line}|");
    }
    Ok(())
}
