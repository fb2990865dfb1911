use crate::error::Result;

use super::config::{Boundaries, SimulationConfig};
use super::field::Field;
use super::momentum::Intermediate;
use super::poisson::Multigrid;
use super::state::{fill_velocity_boundaries, poisson_boundaries, FlowState, OutletFace};

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionReport {
    pub iterations: usize,
    /// Residual after each cycle, in units of the divergence scale `u_ref/Δx`.
    pub residual_history: Vec<f64>,
    /// Max |∇·u| over all cells after the correction.
    pub max_divergence: f64,
}

/// Pressure-solver workspace sized for one grid.
pub struct Projector {
    mg: Multigrid,
    rhs: Field,
}

impl Projector {
    pub fn new(state: &FlowState, cfg: &SimulationConfig) -> Self {
        let g = &state.grid;
        Projector {
            mg: Multigrid::new(g.nx, g.ny, g.dx, g.dy, poisson_boundaries(cfg)),
            rhs: Field::new(g.nx, g.ny),
        }
    }
}

/// Solves `∇²φ = (ρ/dt) ∇·u*`, sets `u = u* − (dt/ρ)∇φ` and `p = φ`.
///
/// The predictor carries no pressure gradient, so `φ` is the full pressure;
/// the previous pressure is the initial guess. The discrete Laplacian is the
/// divergence of the discrete gradient, so the corrected divergence equals
/// `(dt/ρ)` times the solver residual and the stopping test bounds it directly.
pub fn project(
    intermediate: &Intermediate,
    state: &mut FlowState,
    dt: f64,
    cfg: &SimulationConfig,
    projector: &mut Projector,
) -> Result<ProjectionReport> {
    let grid = state.grid;
    let (nx, ny) = (grid.nx, grid.ny);
    let (dx, dy) = (grid.dx, grid.dy);
    let rho = cfg.rho;
    state.u.copy_from(&intermediate.u);
    state.v.copy_from(&intermediate.v);

    for j in 0..ny {
        for i in 0..nx {
            *projector.rhs.at_mut(i, j) = rho / dt * state.divergence(i, j);
        }
    }
    let divergence_scale = cfg.u_ref / grid.min_spacing();
    // residual → divergence units
    let to_divergence = dt / rho;
    let abs_tol = cfg.poisson_tolerance * divergence_scale / to_divergence;
    let solve = projector
        .mg
        .solve(
            &mut state.p,
            &projector.rhs,
            abs_tol,
            cfg.poisson_max_iterations,
        )
        .map_err(|e| match e {
            crate::Error::PoissonDivergence {
                iterations,
                residual,
            } => crate::Error::PoissonDivergence {
                iterations,
                residual: residual * to_divergence / divergence_scale,
            },
            other => other,
        })?;

    let p = &state.p;
    let (gx, gy) = (dt / (rho * dx), dt / (rho * dy));
    let (u_faces, v_faces) = match cfg.boundaries {
        // inlet face and walls are fixed; the outlet face is corrected
        // against the zero-pressure ghost
        Boundaries::Channel => ((1, nx + 1), (1, ny)),
        Boundaries::Periodic => ((0, nx), (0, ny)),
    };
    for j in 0..ny {
        for i in u_faces.0..u_faces.1 {
            let grad = p.get(i as isize, j as isize) - p.get(i as isize - 1, j as isize);
            *state.u.at_mut(i, j) -= gx * grad;
        }
    }
    for j in v_faces.0..v_faces.1 {
        for i in 0..nx {
            let grad = p.get(i as isize, j as isize) - p.get(i as isize, j as isize - 1);
            *state.v.at_mut(i, j) -= gy * grad;
        }
    }
    fill_velocity_boundaries(&mut state.u, &mut state.v, &grid, cfg, OutletFace::Keep);

    let mut max_divergence = 0.0f64;
    for j in 0..ny {
        for i in 0..nx {
            max_divergence = max_divergence.max(state.divergence(i, j).abs());
        }
    }
    Ok(ProjectionReport {
        iterations: solve.iterations,
        residual_history: solve
            .residual_history
            .iter()
            .map(|r| r * to_divergence / divergence_scale)
            .collect(),
        max_divergence,
    })
}
