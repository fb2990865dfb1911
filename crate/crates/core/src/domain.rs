use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::{Point, Shape};
use crate::grid::Grid;

/// Computational box sized in body widths: the grid spans
/// `lx_over_d · D × ly_over_d · D` and the body sits `body_x_over_d · D`
/// downstream of the inlet, centered cross-stream.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DomainSpec {
    pub nx: usize,
    pub ny: usize,
    #[serde(rename = "Lx_over_D")]
    pub lx_over_d: f64,
    #[serde(rename = "Ly_over_D")]
    pub ly_over_d: f64,
    #[serde(rename = "body_x_over_D")]
    pub body_x_over_d: f64,
}

impl Default for DomainSpec {
    fn default() -> Self {
        DomainSpec {
            nx: 256,
            ny: 128,
            lx_over_d: 32.0,
            ly_over_d: 16.0,
            body_x_over_d: 8.0,
        }
    }
}

impl DomainSpec {
    /// Grid for `shape`, and the shape moved to its station in that grid.
    pub fn place(&self, shape: &Shape) -> Result<(Shape, Grid)> {
        let d = shape.frontal_width();
        let grid = Grid::new(self.nx, self.ny, self.lx_over_d * d, self.ly_over_d * d)?;
        let placed = shape.moved_to(Point::new(self.body_x_over_d * d, 0.5 * grid.ly));
        Ok((placed, grid))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{design, DesignTag};

    #[test]
    fn default_domain_for_initial_design() {
        let (shape, grid) = DomainSpec::default().place(&design(DesignTag::Id)).unwrap();
        assert!((grid.lx - 3.2).abs() < 1e-12 && (grid.ly - 1.6).abs() < 1e-12);
        assert!((shape.center().x - 0.8).abs() < 1e-12);
        assert!((shape.center().y - 0.8).abs() < 1e-12);
        assert!((grid.dx - 0.0125).abs() < 1e-15);
    }
}
