use crate::geometry::Point;
use crate::grid::Grid;

use super::state::FlowState;

/// Cell-centered scalar field, row-major (`j * nx + i`).
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    pub nx: usize,
    pub ny: usize,
    pub values: Vec<f64>,
}

impl ScalarField {
    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nx + i]
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
                (lo.min(x), hi.max(x))
            })
    }
}

fn cell_centered(state: &FlowState) -> (Vec<f64>, Vec<f64>) {
    let (nx, ny) = (state.grid.nx, state.grid.ny);
    let mut uc = vec![0.0; nx * ny];
    let mut vc = vec![0.0; nx * ny];
    for j in 0..ny {
        for i in 0..nx {
            uc[j * nx + i] = 0.5 * (state.u.at(i, j) + state.u.at(i + 1, j));
            vc[j * nx + i] = 0.5 * (state.v.at(i, j) + state.v.at(i, j + 1));
        }
    }
    (uc, vc)
}

/// Derivative along one index direction: central inside, one-sided at the ends.
#[inline]
fn difference(values: &[f64], k: usize, pos: usize, n: usize, step: usize, h: f64) -> f64 {
    if pos == 0 {
        (values[k + step] - values[k]) / h
    } else if pos == n - 1 {
        (values[k] - values[k - step]) / h
    } else {
        (values[k + step] - values[k - step]) / (2.0 * h)
    }
}

/// `ω = ∂v/∂x − ∂u/∂y` at cell centers; zero in solid cells.
pub fn vorticity(state: &FlowState) -> ScalarField {
    let (nx, ny) = (state.grid.nx, state.grid.ny);
    let (uc, vc) = cell_centered(state);
    let mut values = vec![0.0; nx * ny];
    for j in 0..ny {
        for i in 0..nx {
            let k = j * nx + i;
            if state.mask.solid[k] {
                continue;
            }
            let dvdx = difference(&vc, k, i, nx, 1, state.grid.dx);
            let dudy = difference(&uc, k, j, ny, nx, state.grid.dy);
            values[k] = dvdx - dudy;
        }
    }
    ScalarField { nx, ny, values }
}

/// Cell-centered copy of the flow fields at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSnapshot {
    pub time: f64,
    pub grid: Grid,
    pub u: ScalarField,
    pub v: ScalarField,
    pub p: ScalarField,
    pub omega: ScalarField,
}

impl FieldSnapshot {
    pub fn capture(state: &FlowState) -> FieldSnapshot {
        let (nx, ny) = (state.grid.nx, state.grid.ny);
        let (uc, vc) = cell_centered(state);
        let p = (0..ny)
            .flat_map(|j| (0..nx).map(move |i| (i, j)))
            .map(|(i, j)| state.p.at(i, j))
            .collect();
        let field = |values| ScalarField { nx, ny, values };
        FieldSnapshot {
            time: state.time,
            grid: state.grid,
            u: field(uc),
            v: field(vc),
            p: field(p),
            omega: vorticity(state),
        }
    }

    pub fn cell_center(&self, i: usize, j: usize) -> Point {
        self.grid.cell_center(i, j)
    }
}
