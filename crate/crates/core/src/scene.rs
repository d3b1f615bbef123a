//! Synthetic scene-intensity grids over direction cosines.
//!
//! Shapes are rasterized by pixel-centre coverage: a pixel receives a
//! shape's amplitude iff its centre lies inside the shape. Overlapping
//! shapes add.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Axis, RealGrid};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Amplitude of the person/mannequin background phantom.
pub const PHANTOM_AMPLITUDE: f64 = 1.0;
/// Amplitude of a metallic target; a stronger scatterer than the background.
pub const METAL_AMPLITUDE: f64 = 3.0;

/// Physical size of the gun-shape target, metres (width along `l`, height along `m`).
pub const GUN_WIDTH_M: f64 = 0.164;
pub const GUN_HEIGHT_M: f64 = 0.235;

/// Gun outline in bounding-box fractions, counter-clockwise from the
/// bottom-left corner. A vertical barrel on the left with the grip running
/// along the bottom edge.
const GUN_OUTLINE: [(f64, f64); 6] = [
    (0.0, 0.0),
    (1.0, 0.0),
    (1.0, 0.30),
    (0.32, 0.30),
    (0.32, 1.0),
    (0.0, 1.0),
];

/// Standoff geometry and carrier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GeometryFields", into = "GeometryFields")]
pub struct GeometryContext {
    range_m: f64,
    frequency_hz: f64,
    wavelength_m: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeometryFields {
    range_m: f64,
    frequency_hz: f64,
}

impl TryFrom<GeometryFields> for GeometryContext {
    type Error = Error;
    fn try_from(f: GeometryFields) -> Result<Self> {
        GeometryContext::new(f.range_m, f.frequency_hz)
    }
}

impl From<GeometryContext> for GeometryFields {
    fn from(g: GeometryContext) -> Self {
        GeometryFields {
            range_m: g.range_m,
            frequency_hz: g.frequency_hz,
        }
    }
}

impl GeometryContext {
    pub fn new(range_m: f64, frequency_hz: f64) -> Result<Self> {
        if !(range_m > 0.0 && range_m.is_finite()) {
            return Err(Error::Domain(format!("range must be positive, got {range_m}")));
        }
        if !(frequency_hz > 0.0 && frequency_hz.is_finite()) {
            return Err(Error::Domain(format!(
                "frequency must be positive, got {frequency_hz}"
            )));
        }
        Ok(GeometryContext {
            range_m,
            frequency_hz,
            wavelength_m: SPEED_OF_LIGHT / frequency_hz,
        })
    }

    pub fn range_m(&self) -> f64 {
        self.range_m
    }

    pub fn frequency_hz(&self) -> f64 {
        self.frequency_hz
    }

    pub fn wavelength_m(&self) -> f64 {
        self.wavelength_m
    }
}

impl Default for GeometryContext {
    /// 1.83 m standoff at 75 GHz.
    fn default() -> Self {
        GeometryContext::new(1.83, 75e9).expect("default geometry is valid")
    }
}

/// Angular extent (direction cosine) subtended by a physical size at the standoff range.
pub fn physical_to_direction_cosine(size_m: f64, ctx: &GeometryContext) -> Result<f64> {
    if !(size_m >= 0.0) || !size_m.is_finite() {
        return Err(Error::Domain(format!("size must be non-negative, got {size_m}")));
    }
    Ok((size_m / ctx.range_m).atan().sin())
}

/// Grid layout for a scene: `rows x cols` pixels spanning
/// `l in [-l_half, l_half)` and `m in [-m_half, m_half)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub rows: usize,
    pub cols: usize,
    pub l_half: f64,
    pub m_half: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            rows: 256,
            cols: 256,
            l_half: 0.25,
            m_half: 0.25,
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if self.rows < 2 || self.cols < 2 {
            return Err(Error::Domain(format!(
                "grid needs at least 2x2 pixels, got {}x{}",
                self.rows, self.cols
            )));
        }
        for (name, e) in [("l", self.l_half), ("m", self.m_half)] {
            if !(e > 0.0 && e <= 1.0) {
                return Err(Error::Domain(format!(
                    "{name} extent must lie within [-1, 1], got half-width {e}"
                )));
            }
        }
        Ok(())
    }

    pub fn l_axis(&self) -> Axis {
        Axis::centered(self.cols, 2.0 * self.l_half / self.cols as f64)
    }

    pub fn m_axis(&self) -> Axis {
        Axis::centered(self.rows, 2.0 * self.m_half / self.rows as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ShapeKind {
    /// Deposits the full amplitude into the single nearest pixel.
    Point { at: (f64, f64) },
    Rectangle {
        center: (f64, f64),
        width: f64,
        height: f64,
    },
    /// Simple polygon; rotation is about the vertex centroid.
    Polygon { vertices: Vec<(f64, f64)> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapeSpec {
    #[serde(flatten)]
    pub kind: ShapeKind,
    pub amplitude: f64,
    /// Counter-clockwise rotation in the (l, m) plane, radians.
    #[serde(default)]
    pub rotation: f64,
}

impl ShapeSpec {
    pub fn point(l: f64, m: f64, amplitude: f64) -> Self {
        ShapeSpec {
            kind: ShapeKind::Point { at: (l, m) },
            amplitude,
            rotation: 0.0,
        }
    }

    pub fn rectangle(center: (f64, f64), width: f64, height: f64, amplitude: f64) -> Self {
        ShapeSpec {
            kind: ShapeKind::Rectangle {
                center,
                width,
                height,
            },
            amplitude,
            rotation: 0.0,
        }
    }

    pub fn polygon(vertices: Vec<(f64, f64)>, amplitude: f64) -> Self {
        ShapeSpec {
            kind: ShapeKind::Polygon { vertices },
            amplitude,
            rotation: 0.0,
        }
    }

    pub fn rotated(mut self, rotation: f64) -> Self {
        self.rotation = rotation;
        self
    }

    /// Polygon approximating an ellipse with `n` vertices.
    pub fn ellipse(center: (f64, f64), semi_l: f64, semi_m: f64, n: usize, amplitude: f64) -> Self {
        let vertices = (0..n)
            .map(|i| {
                let t = std::f64::consts::TAU * i as f64 / n as f64;
                (center.0 + semi_l * t.cos(), center.1 + semi_m * t.sin())
            })
            .collect();
        ShapeSpec::polygon(vertices, amplitude)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.amplitude > 0.0 && self.amplitude.is_finite()) {
            return Err(Error::Shape(format!(
                "amplitude must be finite and positive, got {}",
                self.amplitude
            )));
        }
        if !self.rotation.is_finite() {
            return Err(Error::Shape("rotation must be finite".into()));
        }
        match &self.kind {
            ShapeKind::Point { at } => check_coord(*at),
            ShapeKind::Rectangle {
                center,
                width,
                height,
            } => {
                check_coord(*center)?;
                if !(*width > 0.0 && *height > 0.0 && width.is_finite() && height.is_finite()) {
                    return Err(Error::Shape(format!(
                        "rectangle needs positive size, got {width} x {height}"
                    )));
                }
                Ok(())
            }
            ShapeKind::Polygon { vertices } => validate_polygon(vertices),
        }
    }

    /// Outline after rotation, or `None` for points.
    fn outline(&self) -> Option<Vec<(f64, f64)>> {
        let (verts, pivot) = match &self.kind {
            ShapeKind::Point { .. } => return None,
            ShapeKind::Rectangle {
                center,
                width,
                height,
            } => {
                let (hw, hh) = (width / 2.0, height / 2.0);
                let (cl, cm) = *center;
                (
                    vec![
                        (cl - hw, cm - hh),
                        (cl + hw, cm - hh),
                        (cl + hw, cm + hh),
                        (cl - hw, cm + hh),
                    ],
                    *center,
                )
            }
            ShapeKind::Polygon { vertices } => (vertices.clone(), centroid(vertices)),
        };
        if self.rotation == 0.0 {
            return Some(verts);
        }
        let (s, c) = self.rotation.sin_cos();
        Some(
            verts
                .into_iter()
                .map(|(l, m)| {
                    let (dl, dm) = (l - pivot.0, m - pivot.1);
                    (pivot.0 + c * dl - s * dm, pivot.1 + s * dl + c * dm)
                })
                .collect(),
        )
    }
}

fn check_coord((l, m): (f64, f64)) -> Result<()> {
    if !(l.is_finite() && m.is_finite()) || l.abs() > 1.0 || m.abs() > 1.0 {
        return Err(Error::Shape(format!(
            "coordinate ({l}, {m}) is not a valid direction cosine"
        )));
    }
    Ok(())
}

fn centroid(vertices: &[(f64, f64)]) -> (f64, f64) {
    let n = vertices.len() as f64;
    let (sl, sm) = vertices
        .iter()
        .fold((0.0, 0.0), |(a, b), &(l, m)| (a + l, b + m));
    (sl / n, sm / n)
}

fn signed_area(vertices: &[(f64, f64)]) -> f64 {
    let n = vertices.len();
    (0..n)
        .map(|i| {
            let (a, b) = (vertices[i], vertices[(i + 1) % n]);
            a.0 * b.1 - b.0 * a.1
        })
        .sum::<f64>()
        / 2.0
}

fn orient(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> f64 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

fn segments_intersect(p1: (f64, f64), p2: (f64, f64), q1: (f64, f64), q2: (f64, f64)) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    let on_segment = |a: (f64, f64), b: (f64, f64), p: (f64, f64)| {
        p.0 >= a.0.min(b.0) && p.0 <= a.0.max(b.0) && p.1 >= a.1.min(b.1) && p.1 <= a.1.max(b.1)
    };
    (d1 == 0.0 && on_segment(q1, q2, p1))
        || (d2 == 0.0 && on_segment(q1, q2, p2))
        || (d3 == 0.0 && on_segment(p1, p2, q1))
        || (d4 == 0.0 && on_segment(p1, p2, q2))
}

fn validate_polygon(vertices: &[(f64, f64)]) -> Result<()> {
    let n = vertices.len();
    if n < 3 {
        return Err(Error::Shape(format!("polygon needs at least 3 vertices, got {n}")));
    }
    for &v in vertices {
        check_coord(v)?;
    }
    if signed_area(vertices).abs() < 1e-15 {
        return Err(Error::Shape("polygon has zero area".into()));
    }
    for i in 0..n {
        let (a1, a2) = (vertices[i], vertices[(i + 1) % n]);
        for j in i + 1..n {
            // adjacent edges share a vertex
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            let (b1, b2) = (vertices[j], vertices[(j + 1) % n]);
            if segments_intersect(a1, a2, b1, b2) {
                return Err(Error::Shape(format!(
                    "polygon is self-intersecting (edges {i} and {j})"
                )));
            }
        }
    }
    Ok(())
}

/// Even-odd crossing test.
fn point_in_polygon(p: (f64, f64), poly: &[(f64, f64)]) -> bool {
    let mut inside = false;
    let n = poly.len();
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (poly[i], poly[j]);
        if (a.1 > p.1) != (b.1 > p.1) {
            let x = a.0 + (p.1 - a.1) / (b.1 - a.1) * (b.0 - a.0);
            if p.0 < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

/// Real, non-negative scene intensity over direction cosines.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneIntensity {
    grid: RealGrid,
}

impl SceneIntensity {
    pub fn from_grid(grid: RealGrid) -> Result<Self> {
        if let Some(v) = grid.values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::Numeric(format!(
                "scene intensity must be finite and non-negative, found {v}"
            )));
        }
        for axis in [grid.x_axis, grid.y_axis] {
            if axis.min < -1.0 || axis.max() > 1.0 || !(axis.step > 0.0) {
                return Err(Error::Domain(
                    "scene axes must be increasing direction cosines within [-1, 1]".into(),
                ));
            }
        }
        Ok(SceneIntensity { grid })
    }

    pub fn grid(&self) -> &RealGrid {
        &self.grid
    }

    pub fn into_grid(self) -> RealGrid {
        self.grid
    }

    pub fn l_axis(&self) -> Axis {
        self.grid.x_axis
    }

    pub fn m_axis(&self) -> Axis {
        self.grid.y_axis
    }

    pub fn nonzero_count(&self) -> usize {
        self.grid.values.iter().filter(|v| **v != 0.0).count()
    }

    /// Add another scene on the same grid.
    pub fn superpose(&self, other: &SceneIntensity) -> Result<SceneIntensity> {
        if !self.grid.same_shape(&other.grid) || self.grid.x_axis != other.grid.x_axis {
            return Err(Error::Precondition("scenes must share a grid".into()));
        }
        let mut grid = self.grid.clone();
        for (a, b) in grid.values.iter_mut().zip(&other.grid.values) {
            *a += b;
        }
        Ok(SceneIntensity { grid })
    }
}

/// Rasterize `shapes` additively onto an empty grid.
pub fn make_scene(spec: &GridSpec, shapes: &[ShapeSpec]) -> Result<SceneIntensity> {
    spec.validate()?;
    for s in shapes {
        s.validate()?;
    }
    let (l_axis, m_axis) = (spec.l_axis(), spec.m_axis());
    let mut grid = RealGrid::filled(l_axis, m_axis, 0.0);
    for shape in shapes {
        rasterize(&mut grid, shape);
    }
    SceneIntensity::from_grid(grid)
}

fn rasterize(grid: &mut RealGrid, shape: &ShapeSpec) {
    let (l_axis, m_axis) = (grid.x_axis, grid.y_axis);
    let Some(outline) = shape.outline() else {
        if let ShapeKind::Point { at } = shape.kind {
            if let (Some(c), Some(r)) = (l_axis.nearest(at.0), m_axis.nearest(at.1)) {
                *grid.get_mut(r, c) += shape.amplitude;
            }
        }
        return;
    };
    let (mut lo_l, mut hi_l, mut lo_m, mut hi_m) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(l, m) in &outline {
        lo_l = lo_l.min(l);
        hi_l = hi_l.max(l);
        lo_m = lo_m.min(m);
        hi_m = hi_m.max(m);
    }
    let span = |axis: Axis, lo: f64, hi: f64| {
        let first = ((lo - axis.min) / axis.step).floor().max(0.0) as usize;
        let last = ((hi - axis.min) / axis.step).ceil();
        if last < 0.0 {
            return first..first;
        }
        first..(last as usize + 1).min(axis.len)
    };
    for r in span(m_axis, lo_m, hi_m) {
        let m = m_axis.coord(r);
        for c in span(l_axis, lo_l, hi_l) {
            if point_in_polygon((l_axis.coord(c), m), &outline) {
                *grid.get_mut(r, c) += shape.amplitude;
            }
        }
    }
}

/// Gun-shape polygon scaled to its physical bounding box at the standoff range.
pub fn gun_shape(ctx: &GeometryContext, center: (f64, f64), orientation: f64, amplitude: f64) -> Result<ShapeSpec> {
    let w = physical_to_direction_cosine(GUN_WIDTH_M, ctx)?;
    let h = physical_to_direction_cosine(GUN_HEIGHT_M, ctx)?;
    let vertices: Vec<(f64, f64)> = GUN_OUTLINE
        .iter()
        .map(|&(fx, fy)| (center.0 + (fx - 0.5) * w, center.1 + (fy - 0.5) * h))
        .collect();
    // rotate about the bounding-box centre, not the vertex centroid
    let (s, c) = orientation.sin_cos();
    let vertices = vertices
        .into_iter()
        .map(|(l, m)| {
            let (dl, dm) = (l - center.0, m - center.1);
            (center.0 + c * dl - s * dm, center.1 + s * dl + c * dm)
        })
        .collect();
    Ok(ShapeSpec::polygon(vertices, amplitude))
}

/// The metallic gun-shape target alone, centred on the default grid.
pub fn gun_shape_scene(ctx: &GeometryContext, orientation: f64) -> Result<SceneIntensity> {
    make_scene(
        &GridSpec::default(),
        &[gun_shape(ctx, (0.0, 0.0), orientation, METAL_AMPLITUDE)?],
    )
}

/// Torso phantom: an ellipse of the given physical width and height.
pub fn torso_phantom(
    ctx: &GeometryContext,
    center: (f64, f64),
    width_m: f64,
    height_m: f64,
    amplitude: f64,
) -> Result<ShapeSpec> {
    let semi_l = physical_to_direction_cosine(width_m / 2.0, ctx)?;
    let semi_m = physical_to_direction_cosine(height_m / 2.0, ctx)?;
    Ok(ShapeSpec::ellipse(center, semi_l, semi_m, 72, amplitude))
}
