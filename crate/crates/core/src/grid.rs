use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point;

/// Uniform Cartesian grid of `nx × ny` cells covering `[origin, origin + (lx, ly)]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub nx: usize,
    pub ny: usize,
    pub dx: f64,
    pub dy: f64,
    pub origin: Point,
    pub lx: f64,
    pub ly: f64,
}

impl Grid {
    pub const MIN_CELLS: usize = 16;

    pub fn new(nx: usize, ny: usize, lx: f64, ly: f64) -> Result<Self> {
        Self::with_origin(nx, ny, lx, ly, Point::new(0.0, 0.0))
    }

    pub fn with_origin(nx: usize, ny: usize, lx: f64, ly: f64, origin: Point) -> Result<Self> {
        if nx < Self::MIN_CELLS || ny < Self::MIN_CELLS {
            return Err(Error::InvalidConfig(format!(
                "grid needs at least {} cells per side, got {nx}×{ny}",
                Self::MIN_CELLS
            )));
        }
        if !(lx > 0.0 && ly > 0.0 && lx.is_finite() && ly.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "domain lengths must be positive, got {lx}×{ly}"
            )));
        }
        Ok(Grid {
            nx,
            ny,
            dx: lx / nx as f64,
            dy: ly / ny as f64,
            origin,
            lx,
            ly,
        })
    }

    #[inline]
    pub fn cell_center(&self, i: usize, j: usize) -> Point {
        Point::new(
            self.origin.x + (i as f64 + 0.5) * self.dx,
            self.origin.y + (j as f64 + 0.5) * self.dy,
        )
    }

    /// Location of the x-face `i` (0..=nx) in row `j`.
    #[inline]
    pub fn u_face(&self, i: usize, j: usize) -> Point {
        Point::new(
            self.origin.x + i as f64 * self.dx,
            self.origin.y + (j as f64 + 0.5) * self.dy,
        )
    }

    /// Location of the y-face `j` (0..=ny) in column `i`.
    #[inline]
    pub fn v_face(&self, i: usize, j: usize) -> Point {
        Point::new(
            self.origin.x + (i as f64 + 0.5) * self.dx,
            self.origin.y + j as f64 * self.dy,
        )
    }

    pub fn cell_area(&self) -> f64 {
        self.dx * self.dy
    }

    pub fn min_spacing(&self) -> f64 {
        self.dx.min(self.dy)
    }

    pub fn cells(&self) -> usize {
        self.nx * self.ny
    }
}
