use crate::error::Result;
use crate::geometry::{rasterize, Shape, SolidMask};
use crate::grid::Grid;

use super::config::{inlet_profile, Boundaries, SimulationConfig};
use super::field::Field;
use super::poisson::{fill_pressure_ghosts, PoissonBoundaries};

/// Velocity and pressure on a staggered (MAC) grid.
///
/// `u` lives on x-faces (`(nx + 1) × ny`), `v` on y-faces (`nx × (ny + 1)`)
/// and `p` at cell centers. In periodic mode face `nx` of `u` (and `ny` of
/// `v`) duplicates face 0.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowState {
    pub grid: Grid,
    pub u: Field,
    pub v: Field,
    pub p: Field,
    pub mask: SolidMask,
    pub time: f64,
    pub(crate) body: BodyFaces,
}

/// Flat indices of solid velocity faces, precomputed from the mask.
#[derive(Debug, Clone, PartialEq, Default)]
pub(crate) struct BodyFaces {
    pub u: Vec<(usize, usize)>,
    pub v: Vec<(usize, usize)>,
}

impl BodyFaces {
    fn from_mask(mask: &SolidMask) -> Self {
        let (nx, ny) = (mask.nx, mask.ny);
        let mut faces = BodyFaces::default();
        for j in 0..ny {
            for i in 0..=nx {
                if mask.u_solid[j * (nx + 1) + i] {
                    faces.u.push((i, j));
                }
            }
        }
        for j in 0..=ny {
            for i in 0..nx {
                if mask.v_solid[j * nx + i] {
                    faces.v.push((i, j));
                }
            }
        }
        faces
    }
}

impl FlowState {
    /// Quiescent state with the given mask.
    pub fn new(grid: Grid, mask: SolidMask) -> Self {
        let body = BodyFaces::from_mask(&mask);
        FlowState {
            u: Field::new(grid.nx + 1, grid.ny),
            v: Field::new(grid.nx, grid.ny + 1),
            p: Field::new(grid.nx, grid.ny),
            grid,
            mask,
            time: 0.0,
            body,
        }
    }

    pub fn all_finite(&self) -> bool {
        self.u.all_finite() && self.v.all_finite() && self.p.all_finite()
    }

    pub fn max_speed(&self) -> f64 {
        self.u.max_abs().max(self.v.max_abs())
    }

    /// Discrete divergence of cell `(i, j)`.
    #[inline]
    pub fn divergence(&self, i: usize, j: usize) -> f64 {
        (self.u.at(i + 1, j) - self.u.at(i, j)) / self.grid.dx
            + (self.v.at(i, j + 1) - self.v.at(i, j)) / self.grid.dy
    }

    /// Max |∇·u| over fluid cells.
    pub fn max_fluid_divergence(&self) -> f64 {
        let mut max = 0.0f64;
        for j in 0..self.grid.ny {
            for i in 0..self.grid.nx {
                if !self.mask.is_solid(i, j) {
                    max = max.max(self.divergence(i, j).abs());
                }
            }
        }
        max
    }

    /// Pressure interpolated onto the outlet face of row `j`.
    pub fn outlet_pressure(&self, j: usize) -> f64 {
        let nx = self.grid.nx as isize;
        0.5 * (self.p.get(nx - 1, j as isize) + self.p.get(nx, j as isize))
    }

    /// Kinetic energy per unit depth and density, `½ Σ (u² + v²) ΔxΔy`.
    /// Boundary faces count half; in periodic mode the two halves are the
    /// same face.
    pub fn kinetic_energy(&self) -> f64 {
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        let mut sum = 0.0;
        for j in 0..ny {
            for i in 0..=nx {
                let w = if i == 0 || i == nx { 0.5 } else { 1.0 };
                sum += w * self.u.at(i, j).powi(2);
            }
        }
        for j in 0..=ny {
            for i in 0..nx {
                let w = if j == 0 || j == ny { 0.5 } else { 1.0 };
                sum += w * self.v.at(i, j).powi(2);
            }
        }
        0.5 * sum * self.grid.cell_area()
    }
}

pub(crate) fn poisson_boundaries(cfg: &SimulationConfig) -> PoissonBoundaries {
    match cfg.boundaries {
        Boundaries::Channel => PoissonBoundaries::CHANNEL,
        Boundaries::Periodic => PoissonBoundaries::PERIODIC,
    }
}

/// Zero pressure, velocity from the active inlet profile in every column,
/// no cross-stream velocity, solid faces at rest.
pub fn initialize(grid: Grid, shape: &Shape, cfg: &SimulationConfig) -> Result<FlowState> {
    let mask = rasterize(shape, &grid)?;
    let mut state = FlowState::new(grid, mask);
    for j in 0..grid.ny {
        let y = grid.cell_center(0, j).y - grid.origin.y;
        let u = inlet_profile(cfg.u_ref, y, cfg);
        for i in 0..=grid.nx {
            *state.u.at_mut(i, j) = u;
        }
    }
    for &(i, j) in &state.body.u {
        *state.u.at_mut(i, j) = 0.0;
    }
    for &(i, j) in &state.body.v {
        *state.v.at_mut(i, j) = 0.0;
    }
    apply_boundary_conditions(&mut state, cfg);
    Ok(state)
}

/// Sets boundary faces and ghost layers of velocity and pressure.
///
/// The outlet face keeps the value left by the last projection, so a
/// projected state stays discretely divergence-free in the last column.
/// Tentative velocities get the zero-gradient outlet instead (see
/// [`predict_velocity`](super::predict_velocity)).
pub fn apply_boundary_conditions(state: &mut FlowState, cfg: &SimulationConfig) {
    fill_velocity_boundaries(
        &mut state.u,
        &mut state.v,
        &state.grid,
        cfg,
        OutletFace::Keep,
    );
    fill_pressure_ghosts(&mut state.p, &poisson_boundaries(cfg));
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum OutletFace {
    /// Zero-gradient copy from the last interior face.
    Extrapolate,
    Keep,
}

pub(crate) fn fill_velocity_boundaries(
    u: &mut Field,
    v: &mut Field,
    grid: &Grid,
    cfg: &SimulationConfig,
    outlet: OutletFace,
) {
    let (nx, ny) = (grid.nx as isize, grid.ny as isize);
    match cfg.boundaries {
        Boundaries::Channel => {
            for j in 0..ny {
                let y = grid.cell_center(0, j as usize).y - grid.origin.y;
                u.set(0, j, inlet_profile(cfg.u_ref, y, cfg));
                u.set(-1, j, u.get(0, j));
                if outlet == OutletFace::Extrapolate {
                    u.set(nx, j, u.get(nx - 1, j));
                }
                u.set(nx + 1, j, u.get(nx, j));
            }
            // free slip: tangential u mirrors across the wall
            for i in -1..=nx + 1 {
                u.set(i, -1, u.get(i, 0));
                u.set(i, ny, u.get(i, ny - 1));
            }
            for i in 0..nx {
                v.set(i, 0, 0.0);
                v.set(i, ny, 0.0);
                v.set(i, -1, -v.get(i, 1));
                v.set(i, ny + 1, -v.get(i, ny - 1));
            }
            for j in -1..=ny + 1 {
                // v = 0 on the inlet face, zero gradient through the outlet
                v.set(-1, j, -v.get(0, j));
                v.set(nx, j, v.get(nx - 1, j));
            }
        }
        Boundaries::Periodic => {
            for j in 0..ny {
                u.set(nx, j, u.get(0, j));
                u.set(-1, j, u.get(nx - 1, j));
                u.set(nx + 1, j, u.get(1, j));
            }
            for i in -1..=nx + 1 {
                u.set(i, -1, u.get(i, ny - 1));
                u.set(i, ny, u.get(i, 0));
            }
            for i in 0..nx {
                v.set(i, ny, v.get(i, 0));
                v.set(i, -1, v.get(i, ny - 1));
                v.set(i, ny + 1, v.get(i, 1));
            }
            for j in -1..=ny + 1 {
                v.set(-1, j, v.get(nx - 1, j));
                v.set(nx, j, v.get(0, j));
            }
        }
    }
}
