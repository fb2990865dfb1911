//! Mast cross-sections as signed-distance functions, and their rasterization
//! onto the solver grid.
//!
//! Signed distance is negative inside a body, positive outside and zero on
//! its boundary. Circles are exact. Ellipses use a monotone Newton solve of
//! the nearest-point problem in the ellipse's own frame.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;

/// Sub-samples per cell edge used for volume fractions.
pub const SUBSAMPLES: usize = 4;

const ELLIPSE_MAX_ITERATIONS: usize = 32;
const ELLIPSE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ShapeKind {
    Circle {
        diameter: f64,
    },
    /// `orientation` is the angle of the long axis from the +x flow direction.
    Ellipse {
        short_diameter: f64,
        long_diameter: f64,
        orientation: f64,
    },
    /// Union of member shapes. May be empty.
    Composite(Vec<Shape>),
}

/// A rigid 2D body.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ShapeSpec", into = "ShapeSpec")]
pub struct Shape {
    kind: ShapeKind,
    center: Point,
    frontal_width: f64,
}

/// Serialized form of [`Shape`].
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum ShapeSpec {
    Circle {
        #[serde(default)]
        center: Point,
        diameter: f64,
    },
    Ellipse {
        #[serde(default)]
        center: Point,
        short_diameter: f64,
        long_diameter: f64,
        #[serde(default)]
        orientation: f64,
    },
    Composite {
        #[serde(default)]
        center: Point,
        members: Vec<Shape>,
    },
}

impl TryFrom<ShapeSpec> for Shape {
    type Error = Error;

    fn try_from(spec: ShapeSpec) -> Result<Shape> {
        match spec {
            ShapeSpec::Circle { center, diameter } => Shape::circle(center, diameter),
            ShapeSpec::Ellipse {
                center,
                short_diameter,
                long_diameter,
                orientation,
            } => Shape::ellipse(center, short_diameter, long_diameter, orientation),
            ShapeSpec::Composite { center, members } => {
                Ok(Shape::from_kind(center, ShapeKind::Composite(members)))
            }
        }
    }
}

impl From<Shape> for ShapeSpec {
    fn from(shape: Shape) -> ShapeSpec {
        let center = shape.center;
        match shape.kind {
            ShapeKind::Circle { diameter } => ShapeSpec::Circle { center, diameter },
            ShapeKind::Ellipse {
                short_diameter,
                long_diameter,
                orientation,
            } => ShapeSpec::Ellipse {
                center,
                short_diameter,
                long_diameter,
                orientation,
            },
            ShapeKind::Composite(members) => ShapeSpec::Composite { center, members },
        }
    }
}

impl Shape {
    pub fn circle(center: Point, diameter: f64) -> Result<Shape> {
        if !(diameter > 0.0 && diameter.is_finite()) {
            return Err(Error::InvalidGeometry(format!(
                "circle diameter must be positive, got {diameter}"
            )));
        }
        Ok(Shape::from_kind(center, ShapeKind::Circle { diameter }))
    }

    pub fn ellipse(
        center: Point,
        short_diameter: f64,
        long_diameter: f64,
        orientation: f64,
    ) -> Result<Shape> {
        if !(short_diameter > 0.0 && short_diameter <= long_diameter && long_diameter.is_finite()) {
            return Err(Error::InvalidGeometry(format!(
                "ellipse needs 0 < short ≤ long, got short {short_diameter}, long {long_diameter}"
            )));
        }
        if !orientation.is_finite() {
            return Err(Error::InvalidGeometry(
                "non-finite ellipse orientation".into(),
            ));
        }
        Ok(Shape::from_kind(
            center,
            ShapeKind::Ellipse {
                short_diameter,
                long_diameter,
                orientation,
            },
        ))
    }

    pub fn composite(members: Vec<Shape>) -> Shape {
        Shape::from_kind(Point::default(), ShapeKind::Composite(members))
    }

    fn from_kind(center: Point, kind: ShapeKind) -> Shape {
        let mut shape = Shape {
            kind,
            center,
            frontal_width: 0.0,
        };
        shape.frontal_width = shape.frontal_width_along(Point::new(1.0, 0.0));
        shape
    }

    pub fn kind(&self) -> &ShapeKind {
        &self.kind
    }

    pub fn center(&self) -> Point {
        self.center
    }

    /// Cross-stream extent for flow along +x.
    pub fn frontal_width(&self) -> f64 {
        self.frontal_width
    }

    pub fn is_empty(&self) -> bool {
        match &self.kind {
            ShapeKind::Composite(members) => members.iter().all(Shape::is_empty),
            _ => false,
        }
    }

    /// Same shape translated so its reference point sits at `center`.
    /// Composite members move rigidly with it.
    pub fn moved_to(&self, center: Point) -> Shape {
        let offset = Point::new(center.x - self.center.x, center.y - self.center.y);
        self.translated(offset)
    }

    fn translated(&self, offset: Point) -> Shape {
        let kind = match &self.kind {
            ShapeKind::Composite(members) => {
                ShapeKind::Composite(members.iter().map(|m| m.translated(offset)).collect())
            }
            other => other.clone(),
        };
        Shape {
            kind,
            center: Point::new(self.center.x + offset.x, self.center.y + offset.y),
            frontal_width: self.frontal_width,
        }
    }

    pub fn sdf(&self, p: Point) -> f64 {
        match &self.kind {
            ShapeKind::Circle { diameter } => p.distance(self.center) - 0.5 * diameter,
            ShapeKind::Ellipse {
                short_diameter,
                long_diameter,
                orientation,
            } => {
                let (s, c) = orientation.sin_cos();
                let dx = p.x - self.center.x;
                let dy = p.y - self.center.y;
                let local_x = dx * c + dy * s;
                let local_y = -dx * s + dy * c;
                ellipse_sdf(0.5 * long_diameter, 0.5 * short_diameter, local_x, local_y)
            }
            ShapeKind::Composite(members) => members
                .iter()
                .map(|m| m.sdf(p))
                .fold(f64::INFINITY, f64::min),
        }
    }

    /// Interval `(min, max)` of the shape projected onto `n`.
    fn support(&self, n: Point) -> Option<(f64, f64)> {
        match &self.kind {
            ShapeKind::Circle { diameter } => Some((
                self.center.dot(n) - 0.5 * diameter,
                self.center.dot(n) + 0.5 * diameter,
            )),
            ShapeKind::Ellipse {
                short_diameter,
                long_diameter,
                orientation,
            } => {
                let (s, c) = orientation.sin_cos();
                let along = n.x * c + n.y * s;
                let across = -n.x * s + n.y * c;
                let a = 0.5 * long_diameter;
                let b = 0.5 * short_diameter;
                let h = (a * a * along * along + b * b * across * across).sqrt();
                let mid = self.center.dot(n);
                Some((mid - h, mid + h))
            }
            ShapeKind::Composite(members) => members
                .iter()
                .filter_map(|m| m.support(n))
                .reduce(|(lo0, hi0), (lo1, hi1)| (lo0.min(lo1), hi0.max(hi1))),
        }
    }

    /// Cross-stream projected extent for flow along `flow_direction`.
    pub fn frontal_width_along(&self, flow_direction: Point) -> f64 {
        let norm = flow_direction.x.hypot(flow_direction.y);
        let n = Point::new(-flow_direction.y / norm, flow_direction.x / norm);
        self.support(n).map_or(0.0, |(lo, hi)| hi - lo)
    }

    /// Axis-aligned bounding box `(min, max)`, or `None` for an empty shape.
    pub fn bounding_box(&self) -> Option<(Point, Point)> {
        let (x0, x1) = self.support(Point::new(1.0, 0.0))?;
        let (y0, y1) = self.support(Point::new(0.0, 1.0))?;
        Some((Point::new(x0, y0), Point::new(x1, y1)))
    }

    pub fn area(&self) -> f64 {
        match &self.kind {
            ShapeKind::Circle { diameter } => std::f64::consts::PI * 0.25 * diameter * diameter,
            ShapeKind::Ellipse {
                short_diameter,
                long_diameter,
                ..
            } => std::f64::consts::PI * 0.25 * short_diameter * long_diameter,
            // Members are assumed disjoint.
            ShapeKind::Composite(members) => members.iter().map(Shape::area).sum(),
        }
    }
}

/// Signed distance to the axis-aligned ellipse `(x/a)² + (y/b)² = 1`, `a ≥ b`.
///
/// The nearest point is `(a²x/(s+a²), b²y/(s+b²))` where `s` is the root of
/// `F(s) = (ax/(s+a²))² + (by/(s+b²))² − 1` on `s > −b²`. `F` is convex and
/// decreasing there, so Newton started left of the root climbs to it
/// monotonically.
fn ellipse_sdf(a: f64, b: f64, x: f64, y: f64) -> f64 {
    let inside = (x / a).powi(2) + (y / b).powi(2) < 1.0;
    let x = x.abs();
    let y = y.abs();
    let dist = if y == 0.0 {
        let focal = (a * a - b * b) / a;
        if x < focal {
            let x0 = a * a * x / (a * a - b * b);
            let y0 = b * (1.0 - (x0 / a).powi(2)).max(0.0).sqrt();
            (x0 - x).hypot(y0)
        } else {
            (x - a).abs()
        }
    } else {
        let ax = a * x;
        let by = b * y;
        let a2 = a * a;
        let b2 = b * b;
        let mut s = (by - b2).max(ax - a2);
        let nearest = |s: f64| (a2 * x / (s + a2), b2 * y / (s + b2));
        let mut point = nearest(s);
        for _ in 0..ELLIPSE_MAX_ITERATIONS {
            let tx = ax / (s + a2);
            let ty = by / (s + b2);
            let f = tx * tx + ty * ty - 1.0;
            if f <= 0.0 {
                break;
            }
            let df = -2.0 * (tx * tx / (s + a2) + ty * ty / (s + b2));
            s -= f / df;
            let next = nearest(s);
            let moved = (next.0 - point.0).hypot(next.1 - point.1);
            point = next;
            if moved < ELLIPSE_TOLERANCE {
                break;
            }
        }
        (point.0 - x).hypot(point.1 - y)
    };
    if inside {
        -dist
    } else {
        dist
    }
}

/// The three mast sections under comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DesignTag {
    /// Initial design: 10 cm circular cylinder.
    #[serde(rename = "ID")]
    Id,
    /// Modified design 1: 5 cm circular cylinder.
    #[serde(rename = "MD1")]
    Md1,
    /// Modified design 2: 5 × 15 cm ellipse, long axis streamwise.
    #[serde(rename = "MD2")]
    Md2,
}

impl DesignTag {
    pub const ALL: [DesignTag; 3] = [DesignTag::Id, DesignTag::Md1, DesignTag::Md2];

    pub fn as_str(self) -> &'static str {
        match self {
            DesignTag::Id => "ID",
            DesignTag::Md1 => "MD1",
            DesignTag::Md2 => "MD2",
        }
    }
}

impl fmt::Display for DesignTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DesignTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ID" => Ok(DesignTag::Id),
            "MD1" => Ok(DesignTag::Md1),
            "MD2" => Ok(DesignTag::Md2),
            other => Err(Error::UnknownDesign(other.to_string())),
        }
    }
}

/// Shape of a design variant, centered at the origin.
pub fn design(tag: DesignTag) -> Shape {
    let origin = Point::default();
    match tag {
        DesignTag::Id => Shape::circle(origin, 0.10),
        DesignTag::Md1 => Shape::circle(origin, 0.05),
        DesignTag::Md2 => Shape::ellipse(origin, 0.05, 0.15, 0.0),
    }
    .expect("design dimensions are valid")
}

/// Per-cell solid fractions on a grid, with derived solid flags for cells and
/// for the staggered velocity faces.
#[derive(Debug, Clone, PartialEq)]
pub struct SolidMask {
    pub nx: usize,
    pub ny: usize,
    /// Cell volume fractions in `[0, 1]`, row-major (`j * nx + i`).
    pub fraction: Vec<f64>,
    /// `fraction > 0.5`.
    pub solid: Vec<bool>,
    /// x-faces, `(nx + 1) × ny`, row-major.
    pub u_solid: Vec<bool>,
    /// y-faces, `nx × (ny + 1)`, row-major.
    pub v_solid: Vec<bool>,
}

impl SolidMask {
    pub fn empty(grid: &Grid) -> SolidMask {
        let (nx, ny) = (grid.nx, grid.ny);
        SolidMask {
            nx,
            ny,
            fraction: vec![0.0; nx * ny],
            solid: vec![false; nx * ny],
            u_solid: vec![false; (nx + 1) * ny],
            v_solid: vec![false; nx * (ny + 1)],
        }
    }

    #[inline]
    pub fn is_solid(&self, i: usize, j: usize) -> bool {
        self.solid[j * self.nx + i]
    }

    pub fn solid_cells(&self) -> usize {
        self.solid.iter().filter(|&&s| s).count()
    }

    /// Fraction-weighted solid area.
    pub fn solid_area(&self, grid: &Grid) -> f64 {
        self.fraction.iter().sum::<f64>() * grid.cell_area()
    }
}

fn sampled_fraction(shape: &Shape, center: Point, hx: f64, hy: f64) -> f64 {
    let n = SUBSAMPLES;
    let mut inside = 0usize;
    for sj in 0..n {
        let y = center.y - 0.5 * hy + (sj as f64 + 0.5) * hy / n as f64;
        for si in 0..n {
            let x = center.x - 0.5 * hx + (si as f64 + 0.5) * hx / n as f64;
            if shape.sdf(Point::new(x, y)) < 0.0 {
                inside += 1;
            }
        }
    }
    inside as f64 / (n * n) as f64
}

/// Rasterizes `shape` with `SUBSAMPLES²` point samples per cell (and per
/// face-centered control volume for the staggered face flags).
pub fn rasterize(shape: &Shape, grid: &Grid) -> Result<SolidMask> {
    let mut mask = SolidMask::empty(grid);
    let Some((lo, hi)) = shape.bounding_box() else {
        return Ok(mask);
    };
    let x_end = grid.origin.x + grid.lx;
    let y_end = grid.origin.y + grid.ly;
    if !(lo.x > grid.origin.x && lo.y > grid.origin.y && hi.x < x_end && hi.y < y_end) {
        return Err(Error::GeometryOutsideDomain(format!(
            "body spans [{:.4}, {:.4}]×[{:.4}, {:.4}] m, domain is [{:.4}, {:.4}]×[{:.4}, {:.4}] m",
            lo.x, hi.x, lo.y, hi.y, grid.origin.x, x_end, grid.origin.y, y_end
        )));
    }
    if grid.dx.max(grid.dy) > shape.frontal_width() {
        return Err(Error::GeometryResolution(format!(
            "grid spacing {:.4e} m exceeds body width {:.4e} m",
            grid.dx.max(grid.dy),
            shape.frontal_width()
        )));
    }

    let (nx, ny) = (grid.nx, grid.ny);
    // Index window of cells that can intersect the bounding box, padded by one.
    let clamp_i = |x: f64, n: usize| -> usize { (x.max(0.0) as usize).min(n) };
    let i0 = clamp_i((lo.x - grid.origin.x) / grid.dx - 1.0, nx);
    let i1 = clamp_i((hi.x - grid.origin.x) / grid.dx + 2.0, nx);
    let j0 = clamp_i((lo.y - grid.origin.y) / grid.dy - 1.0, ny);
    let j1 = clamp_i((hi.y - grid.origin.y) / grid.dy + 2.0, ny);

    for j in j0..j1 {
        for i in i0..i1 {
            let f = sampled_fraction(shape, grid.cell_center(i, j), grid.dx, grid.dy);
            mask.fraction[j * nx + i] = f;
            mask.solid[j * nx + i] = f > 0.5;
        }
    }
    for j in j0..j1 {
        for i in i0..=i1.min(nx) {
            let f = sampled_fraction(shape, grid.u_face(i, j), grid.dx, grid.dy);
            mask.u_solid[j * (nx + 1) + i] = f > 0.5;
        }
    }
    for j in j0..=j1.min(ny) {
        for i in i0..i1 {
            let f = sampled_fraction(shape, grid.v_face(i, j), grid.dx, grid.dy);
            mask.v_solid[j * nx + i] = f > 0.5;
        }
    }

    if mask.solid_cells() == 0 {
        return Err(Error::GeometryResolution(
            "no cell is more than half solid".into(),
        ));
    }
    Ok(mask)
}
