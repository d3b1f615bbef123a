//! Mean structural similarity with uniform 8x8 windows.

use crate::error::{Error, Result};
use crate::grid::RealGrid;

pub const WINDOW: usize = 8;
/// `(0.01 L)^2` with dynamic range `L = 1`.
pub const C1: f64 = 1e-4;
/// `(0.03 L)^2`.
pub const C2: f64 = 9e-4;

/// Summed-area table with a zero top row and left column.
fn integral(values: &[f64], rows: usize, cols: usize) -> Vec<f64> {
    let w = cols + 1;
    let mut s = vec![0.0; (rows + 1) * w];
    for r in 0..rows {
        let mut run = 0.0;
        for c in 0..cols {
            run += values[r * cols + c];
            s[(r + 1) * w + c + 1] = s[r * w + c + 1] + run;
        }
    }
    s
}

fn window_sum(s: &[f64], cols: usize, r: usize, c: usize) -> f64 {
    let w = cols + 1;
    let (r1, c1) = (r + WINDOW, c + WINDOW);
    s[r1 * w + c1] - s[r * w + c1] - s[r1 * w + c] + s[r * w + c]
}

/// SSIM of two images already scaled to [0, 1], averaged over every 8x8
/// window position (stride 1). Window statistics use the population
/// convention.
pub fn ssim(reference: &RealGrid, test: &RealGrid) -> Result<f64> {
    if !reference.same_shape(test) {
        return Err(Error::Precondition(format!(
            "image sizes differ: {}x{} vs {}x{}",
            reference.rows(),
            reference.cols(),
            test.rows(),
            test.cols()
        )));
    }
    let (rows, cols) = (reference.rows(), reference.cols());
    if rows < WINDOW || cols < WINDOW {
        return Err(Error::Precondition(format!("images must be at least {WINDOW}x{WINDOW}")));
    }
    let (x, y) = (&reference.values, &test.values);
    let xx: Vec<f64> = x.iter().map(|v| v * v).collect();
    let yy: Vec<f64> = y.iter().map(|v| v * v).collect();
    let xy: Vec<f64> = x.iter().zip(y).map(|(a, b)| a * b).collect();
    let (sx, sy) = (integral(x, rows, cols), integral(y, rows, cols));
    let (sxx, syy, sxy) = (integral(&xx, rows, cols), integral(&yy, rows, cols), integral(&xy, rows, cols));

    let n = (WINDOW * WINDOW) as f64;
    let mut total = 0.0;
    let mut count = 0usize;
    for r in 0..=rows - WINDOW {
        for c in 0..=cols - WINDOW {
            let mx = window_sum(&sx, cols, r, c) / n;
            let my = window_sum(&sy, cols, r, c) / n;
            let vx = (window_sum(&sxx, cols, r, c) / n - mx * mx).max(0.0);
            let vy = (window_sum(&syy, cols, r, c) / n - my * my).max(0.0);
            let cxy = window_sum(&sxy, cols, r, c) / n - mx * my;
            total += ((2.0 * mx * my + C1) * (2.0 * cxy + C2)) / ((mx * mx + my * my + C1) * (vx + vy + C2));
            count += 1;
        }
    }
    Ok(total / count as f64)
}
