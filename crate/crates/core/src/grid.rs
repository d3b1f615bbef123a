//! Uniformly sampled 2D grids shared by the spatial and Fourier domains.
//!
//! Storage is row-major. Columns run along the first coordinate (`l` or
//! `u`), rows along the second (`m` or `v`). Axes are centered: index `i`
//! of an axis with `len` points sits at `(i - len/2) * step`, so the origin
//! is always a grid node.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A uniform, strictly increasing coordinate axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub min: f64,
    pub step: f64,
    pub len: usize,
}

impl Axis {
    /// Axis of `len` points spaced `step` apart with a node at zero.
    pub fn centered(len: usize, step: f64) -> Self {
        Axis {
            min: -((len / 2) as f64) * step,
            step,
            len,
        }
    }

    /// Rebuild an axis from its endpoints, as stored in file headers.
    pub fn from_endpoints(min: f64, max: f64, len: usize) -> Result<Self> {
        if len < 2 {
            return Err(Error::Domain(format!("axis needs at least 2 points, got {len}")));
        }
        let step = (max - min) / (len - 1) as f64;
        if !(step > 0.0) || !step.is_finite() || !min.is_finite() {
            return Err(Error::Domain(format!(
                "axis endpoints must be finite and increasing, got [{min}, {max}]"
            )));
        }
        Ok(Axis { min, step, len })
    }

    pub fn coord(&self, i: usize) -> f64 {
        self.min + i as f64 * self.step
    }

    pub fn max(&self) -> f64 {
        self.coord(self.len - 1)
    }

    /// Signed index offset of node `i` relative to the centre node.
    pub fn centered_index(&self, i: usize) -> i64 {
        i as i64 - (self.len / 2) as i64
    }

    /// Index of the node nearest to `x`, rounding symmetrically about zero.
    /// Returns `None` when the nearest node lies off the axis.
    pub fn nearest(&self, x: f64) -> Option<usize> {
        let c = (x / self.step).round();
        let offset = (self.min / self.step).round();
        let idx = c - offset;
        if idx >= 0.0 && idx < self.len as f64 {
            Some(idx as usize)
        } else {
            None
        }
    }

    /// Fractional position of `x` in index units, valid when inside the axis.
    pub fn fractional(&self, x: f64) -> Option<f64> {
        let f = (x - self.min) / self.step;
        let last = (self.len - 1) as f64;
        // tolerate rounding right at the end nodes
        if f >= -1e-9 && f <= last + 1e-9 {
            Some(f.clamp(0.0, last))
        } else {
            None
        }
    }

    /// Spacing of the conjugate (Fourier) axis for an unnormalized DFT over this axis.
    pub fn reciprocal(&self) -> Axis {
        Axis::centered(self.len, 1.0 / (self.len as f64 * self.step))
    }
}

/// Row-major 2D grid with coordinate axes.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid<T> {
    /// Columns (first coordinate: `l` or `u`).
    pub x_axis: Axis,
    /// Rows (second coordinate: `m` or `v`).
    pub y_axis: Axis,
    pub values: Vec<T>,
}

pub type RealGrid = Grid<f64>;
pub type ComplexGrid = Grid<Complex64>;

impl<T: Clone> Grid<T> {
    pub fn filled(x_axis: Axis, y_axis: Axis, value: T) -> Self {
        Grid {
            x_axis,
            y_axis,
            values: vec![value; x_axis.len * y_axis.len],
        }
    }
}

impl<T> Grid<T> {
    pub fn rows(&self) -> usize {
        self.y_axis.len
    }

    pub fn cols(&self) -> usize {
        self.x_axis.len
    }

    pub fn get(&self, row: usize, col: usize) -> &T {
        &self.values[row * self.x_axis.len + col]
    }

    pub fn get_mut(&mut self, row: usize, col: usize) -> &mut T {
        &mut self.values[row * self.x_axis.len + col]
    }

    /// Cell area `dx * dy`.
    pub fn cell_area(&self) -> f64 {
        self.x_axis.step * self.y_axis.step
    }

    pub fn same_shape<U>(&self, other: &Grid<U>) -> bool {
        self.rows() == other.rows() && self.cols() == other.cols()
    }
}

impl RealGrid {
    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Clip negatives to zero and divide by the peak, for intensity images
    /// whose background should stay at zero. A grid with no positive value
    /// maps to all zeros.
    pub fn clipped_unit(&self) -> RealGrid {
        let peak = self.max_value();
        let values = self
            .values
            .iter()
            .map(|&v| if peak > 0.0 { v.max(0.0) / peak } else { 0.0 })
            .collect();
        Grid {
            x_axis: self.x_axis,
            y_axis: self.y_axis,
            values,
        }
    }

    /// Min-max rescale to [0, 1]. A constant grid maps to all zeros.
    pub fn normalized_unit(&self) -> RealGrid {
        let (lo, hi) = (self.min_value(), self.max_value());
        let span = hi - lo;
        let values = self
            .values
            .iter()
            .map(|&v| if span > 0.0 { (v - lo) / span } else { 0.0 })
            .collect();
        Grid {
            x_axis: self.x_axis,
            y_axis: self.y_axis,
            values,
        }
    }
}
