//! Scene intensity <-> visibility transforms, ring-sample gridding and PSFs.
//!
//! The forward transform uses the `+j` exponent and the inverse the `-j`
//! exponent:
//!
//! ```text
//! V(u,v)   = sum_{l,m} I(l,m)   exp(+j 2 pi (u l + v m)) dl dm
//! I_r(l,m) = sum_{u,v} V_s(u,v) exp(-j 2 pi (u l + v m)) du dv
//! ```
//!
//! Both are evaluated on centered grids with `du = 1 / (N dl)`, which turns
//! each into an unnormalized FFT between shifted buffers; the pair is an
//! exact inverse.

use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

use crate::dynarray::RingSampleSet;
use crate::error::{Error, Result};
use crate::grid::{Axis, ComplexGrid, Grid, RealGrid};
use crate::scene::SceneIntensity;

pub type VisibilityGrid = ComplexGrid;

/// Imaginary residual above this fraction of the peak gets a warning.
pub const IMAG_RESIDUAL_WARN: f64 = 1e-6;

/// Centered 2D DFT. `direction` Inverse gives the `+j` exponent.
fn centered_dft2(input: &[Complex64], rows: usize, cols: usize, direction: FftDirection) -> Vec<Complex64> {
    let (hr, hc) = (rows / 2, cols / 2);
    let mut buf = vec![Complex64::new(0.0, 0.0); rows * cols];
    for r in 0..rows {
        let sr = (r + hr) % rows;
        for c in 0..cols {
            buf[r * cols + c] = input[sr * cols + (c + hc) % cols];
        }
    }

    let mut planner = FftPlanner::<f64>::new();
    let row_fft = planner.plan_fft(cols, direction);
    row_fft.process(&mut buf);

    let col_fft = planner.plan_fft(rows, direction);
    let mut column = vec![Complex64::new(0.0, 0.0); rows];
    for c in 0..cols {
        for r in 0..rows {
            column[r] = buf[r * cols + c];
        }
        col_fft.process(&mut column);
        for r in 0..rows {
            buf[r * cols + c] = column[r];
        }
    }

    let mut out = vec![Complex64::new(0.0, 0.0); rows * cols];
    for r in 0..rows {
        let sr = (r + rows - hr) % rows;
        for c in 0..cols {
            out[r * cols + c] = buf[sr * cols + (c + cols - hc) % cols];
        }
    }
    out
}

/// Visibility of a scene on the conjugate grid.
pub fn forward_visibility(scene: &SceneIntensity) -> Result<VisibilityGrid> {
    let g = scene.grid();
    if g.values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numeric("scene contains non-finite values".into()));
    }
    let input: Vec<Complex64> = g.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let scale = g.cell_area();
    let mut values = centered_dft2(&input, g.rows(), g.cols(), FftDirection::Inverse);
    for v in &mut values {
        *v *= scale;
    }
    Ok(Grid {
        x_axis: g.x_axis.reciprocal(),
        y_axis: g.y_axis.reciprocal(),
        values,
    })
}

/// Visibility restricted to a support mask; zero elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledVisibility {
    grid: VisibilityGrid,
    mask: Vec<bool>,
}

impl SampledVisibility {
    pub fn new(grid: VisibilityGrid, mask: Vec<bool>) -> Result<Self> {
        if mask.len() != grid.values.len() {
            return Err(Error::Precondition(format!(
                "mask has {} cells, grid has {}",
                mask.len(),
                grid.values.len()
            )));
        }
        if !mask.iter().any(|&m| m) {
            return Err(Error::Precondition("sampling mask is empty".into()));
        }
        let mut grid = grid;
        for (v, &m) in grid.values.iter_mut().zip(&mask) {
            if !m {
                *v = Complex64::new(0.0, 0.0);
            }
        }
        Ok(SampledVisibility { grid, mask })
    }

    /// Every cell sampled.
    pub fn full(grid: VisibilityGrid) -> Self {
        let mask = vec![true; grid.values.len()];
        SampledVisibility { grid, mask }
    }

    pub fn grid(&self) -> &VisibilityGrid {
        &self.grid
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn mask_count(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    /// Fraction of grid cells carrying a sample.
    pub fn coverage(&self) -> f64 {
        self.mask_count() as f64 / self.mask.len() as f64
    }

    /// Indicator of the mask: 1 on sampled cells.
    pub fn indicator(&self) -> SampledVisibility {
        let mut grid = self.grid.clone();
        for (v, &m) in grid.values.iter_mut().zip(&self.mask) {
            *v = if m { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
        }
        SampledVisibility {
            grid,
            mask: self.mask.clone(),
        }
    }

    /// Multiply an unsampled visibility by this mask.
    pub fn apply_to(&self, vis: &VisibilityGrid) -> Result<SampledVisibility> {
        if !vis.same_shape(&self.grid) {
            return Err(Error::Precondition("visibility and mask shapes differ".into()));
        }
        SampledVisibility::new(vis.clone(), self.mask.clone())
    }

    /// Add the conjugate of every sample at the mirrored cell `(-u, -v)`, so
    /// that the support and values are Hermitian. Where both a cell and its
    /// mirror were sampled the two estimates are averaged. Samples whose
    /// mirror falls off the grid (the most negative row/column of an
    /// even-sized grid) are kept unpaired.
    pub fn hermitian_complete(&self) -> SampledVisibility {
        let (rows, cols) = (self.grid.rows(), self.grid.cols());
        let mirror = |axis: &Axis, i: usize| -> Option<usize> {
            let c = -axis.centered_index(i);
            let j = c + (axis.len / 2) as i64;
            (j >= 0 && (j as usize) < axis.len).then_some(j as usize)
        };
        let mut grid = self.grid.clone();
        let mut mask = self.mask.clone();
        for r in 0..rows {
            for c in 0..cols {
                let (Some(mr), Some(mc)) = (mirror(&self.grid.y_axis, r), mirror(&self.grid.x_axis, c)) else {
                    continue;
                };
                let here = r * cols + c;
                let there = mr * cols + mc;
                match (self.mask[here], self.mask[there]) {
                    (true, true) => {
                        grid.values[here] = (self.grid.values[here] + self.grid.values[there].conj()) / 2.0;
                    }
                    (false, true) => {
                        grid.values[here] = self.grid.values[there].conj();
                        mask[here] = true;
                    }
                    _ => {}
                }
            }
        }
        SampledVisibility { grid, mask }
    }
}

/// Real image recovered from sampled visibility.
#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    pub image: RealGrid,
    /// Largest imaginary magnitude divided by the largest real magnitude.
    pub imag_residual: f64,
}

fn real_part_with_residual(values: Vec<Complex64>, x_axis: Axis, y_axis: Axis) -> Reconstruction {
    let peak = values.iter().map(|v| v.re.abs()).fold(0.0, f64::max);
    let imag = values.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
    let imag_residual = if peak > 0.0 { imag / peak } else { imag };
    if imag_residual > IMAG_RESIDUAL_WARN {
        log::warn!("reconstruction imaginary residual {imag_residual:.3e} of peak");
    }
    Reconstruction {
        image: Grid {
            x_axis,
            y_axis,
            values: values.into_iter().map(|v| v.re).collect(),
        },
        imag_residual,
    }
}

/// Inverse transform of sampled visibility; returns the real part and the
/// imaginary residual as a diagnostic.
pub fn inverse_reconstruct(vs: &SampledVisibility) -> Result<Reconstruction> {
    if vs.mask_count() == 0 {
        return Err(Error::Precondition("sampling mask is empty".into()));
    }
    let g = &vs.grid;
    let scale = g.cell_area();
    let mut values = centered_dft2(&g.values, g.rows(), g.cols(), FftDirection::Forward);
    for v in &mut values {
        *v *= scale;
    }
    Ok(real_part_with_residual(
        values,
        g.x_axis.reciprocal(),
        g.y_axis.reciprocal(),
    ))
}

/// Accumulate ring samples into their nearest visibility cells; coincident
/// samples are averaged.
pub fn grid_ring_samples(samples: &RingSampleSet, u_axis: Axis, v_axis: Axis) -> Result<SampledVisibility> {
    let (rows, cols) = (v_axis.len, u_axis.len);
    let mut sums = vec![Complex64::new(0.0, 0.0); rows * cols];
    let mut counts = vec![0u32; rows * cols];
    for s in samples.entries() {
        let (Some(c), Some(r)) = (u_axis.nearest(s.u), v_axis.nearest(s.v)) else {
            return Err(Error::OutOfRange {
                k: s.k,
                detail: format!(
                    "(u, v) = ({:.6}, {:.6}) outside u [{:.6}, {:.6}], v [{:.6}, {:.6}]",
                    s.u,
                    s.v,
                    u_axis.min,
                    u_axis.max(),
                    v_axis.min,
                    v_axis.max()
                ),
            });
        };
        sums[r * cols + c] += s.value;
        counts[r * cols + c] += 1;
    }
    let values = sums
        .iter()
        .zip(&counts)
        .map(|(s, &n)| if n > 0 { s / n as f64 } else { *s })
        .collect();
    let mask = counts.iter().map(|&n| n > 0).collect();
    SampledVisibility::new(
        Grid {
            x_axis: u_axis,
            y_axis: v_axis,
            values,
        },
        mask,
    )
}

/// Point spread function of a sampling mask, normalized to a peak of 1.
/// Sample values are ignored; only the support matters.
pub fn psf(mask: &SampledVisibility) -> Result<Reconstruction> {
    let mut rec = inverse_reconstruct(&mask.indicator())?;
    let peak = rec.image.max_value();
    if !(peak > 0.0) {
        return Err(Error::Numeric("point spread function has no positive peak".into()));
    }
    for v in &mut rec.image.values {
        *v /= peak;
    }
    Ok(rec)
}

/// Exact visibility of a scene at every ring point, without gridding or
/// interpolation. The exponent separates into a column factor and a row
/// factor, so each sample costs one pass over the scene.
pub fn sample_ring_exact(scene: &SceneIntensity, skeleton: &RingSampleSet) -> Result<RingSampleSet> {
    let g = scene.grid();
    let (rows, cols) = (g.rows(), g.cols());
    let rows_used: Vec<usize> = (0..rows)
        .filter(|&r| g.values[r * cols..(r + 1) * cols].iter().any(|&v| v != 0.0))
        .collect();
    let area = g.cell_area();
    let mut cx = vec![Complex64::new(0.0, 0.0); cols];
    let mut values = Vec::with_capacity(skeleton.len());
    for s in skeleton.entries() {
        for (c, z) in cx.iter_mut().enumerate() {
            *z = Complex64::from_polar(1.0, std::f64::consts::TAU * s.u * g.x_axis.coord(c));
        }
        let mut total = Complex64::new(0.0, 0.0);
        for &r in &rows_used {
            let row = &g.values[r * cols..(r + 1) * cols];
            let mut acc = Complex64::new(0.0, 0.0);
            for (z, &v) in cx.iter().zip(row) {
                if v != 0.0 {
                    acc += z * v;
                }
            }
            total += acc * Complex64::from_polar(1.0, std::f64::consts::TAU * s.v * g.y_axis.coord(r));
        }
        values.push(total * area);
    }
    skeleton.with_values(values)
}

/// Image recovered from ring samples alone: grid them onto `vis`'s cells,
/// mirror to a Hermitian support and invert.
pub fn reconstruct_from_ring(samples: &RingSampleSet, u_axis: Axis, v_axis: Axis) -> Result<Reconstruction> {
    let gridded = grid_ring_samples(samples, u_axis, v_axis)?;
    inverse_reconstruct(&gridded.hermitian_complete())
}

/// The `fraction` of cells closest to the origin, ties broken by cell index.
/// A dense low-pass support, the opposite of a thin ring.
pub fn low_frequency_mask(vis: &VisibilityGrid, fraction: f64) -> Result<SampledVisibility> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::Domain(format!("mask fraction must be in (0, 1], got {fraction}")));
    }
    let cols = vis.cols();
    let r2 = |i: usize| {
        let (u, v) = (vis.x_axis.coord(i % cols), vis.y_axis.coord(i / cols));
        u * u + v * v
    };
    let mut order: Vec<usize> = (0..vis.values.len()).collect();
    order.sort_by(|&a, &b| r2(a).total_cmp(&r2(b)).then(a.cmp(&b)));
    let keep = (fraction * order.len() as f64).ceil() as usize;
    let mut mask = vec![false; order.len()];
    for &i in &order[..keep] {
        mask[i] = true;
    }
    SampledVisibility::new(vis.clone(), mask)
}
