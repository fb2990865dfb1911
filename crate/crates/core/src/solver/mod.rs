//! Fractional-step (projection) solver for 2D incompressible flow past a
//! rigid body on a uniform staggered grid.
//!
//! One [`Solver::step`] is: pick `dt` from the Courant and diffusion limits,
//! apply boundary conditions, advance advection and diffusion explicitly,
//! project onto divergence-free fields, then force the velocity to the body
//! velocity on solid faces and read the removed momentum as the body force.

mod body;
mod config;
mod field;
mod momentum;
mod poisson;
mod projection;
mod run;
mod state;
mod vorticity;

pub use body::{enforce_body, BodyMotion};
pub use config::{
    inlet_profile, Boundaries, InletMode, SimulationConfig, SnapshotPolicy, StartupKick,
    AIR_KINEMATIC_VISCOSITY, SHEAR_OFFSET, SHEAR_SLOPE_FACTOR,
};
pub use field::Field;
pub use momentum::{predict_velocity, Intermediate};
pub use poisson::{laplacian, Multigrid, PoissonBoundaries, Side, SolveReport};
pub use projection::{project, ProjectionReport, Projector};
pub use run::{run, run_with, ForceHistory, ForceSample, Progress, RunOutput};
pub use state::{apply_boundary_conditions, initialize, FlowState};
pub use vorticity::{vorticity, FieldSnapshot, ScalarField};

pub use crate::grid::Grid;

use crate::error::{Error, Result};
use crate::geometry::Shape;

/// Largest stable explicit step: `cfl · min(Δx/|u|max, Δy/|v|max, ¼ min(Δx,Δy)²/ν)`.
pub fn cfl_dt(state: &FlowState, cfg: &SimulationConfig) -> Result<f64> {
    let grid = &state.grid;
    let umax = state.u.max_abs();
    let vmax = state.v.max_abs();
    let mut limit = f64::INFINITY;
    if umax > 0.0 {
        limit = limit.min(grid.dx / umax);
    }
    if vmax > 0.0 {
        limit = limit.min(grid.dy / vmax);
    }
    if cfg.nu > 0.0 {
        limit = limit.min(0.25 * grid.min_spacing().powi(2) / cfg.nu);
    }
    let dt = cfg.cfl * limit;
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::DegenerateTimestep(format!(
            "no velocity or diffusion bound (|u|max = {umax}, |v|max = {vmax}, ν = {})",
            cfg.nu
        )));
    }
    Ok(dt)
}

/// Speeds beyond this multiple of `u_ref` are treated as a blowup.
pub const BLOWUP_SPEED_RATIO: f64 = 1e3;

/// Result of one time step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepReport {
    pub dt: f64,
    pub fx: f64,
    pub fy: f64,
    pub projection: ProjectionReport,
}

/// A single-owner flow simulation.
pub struct Solver {
    cfg: SimulationConfig,
    state: FlowState,
    projector: Projector,
    scratch: Intermediate,
    steps: u64,
    kick: Option<(BodyMotion, f64)>,
}

impl Solver {
    pub fn new(shape: &Shape, cfg: SimulationConfig, grid: Grid) -> Result<Solver> {
        cfg.validate()?;
        let state = initialize(grid, shape, &cfg)?;
        let kick = cfg.startup_kick.and_then(|kick| {
            let radius = 0.5 * shape.frontal_width();
            (kick.duration > 0.0 && radius > 0.0).then(|| {
                let motion = BodyMotion {
                    spin: kick.surface_speed * cfg.u_ref / radius,
                    center: shape.center(),
                };
                (motion, kick.duration)
            })
        });
        Ok(Solver::from_state(state, cfg, kick))
    }

    /// Wraps an existing state, e.g. an analytic initial field.
    pub fn with_state(state: FlowState, cfg: SimulationConfig) -> Result<Solver> {
        cfg.validate()?;
        Ok(Solver::from_state(state, cfg, None))
    }

    fn from_state(
        state: FlowState,
        cfg: SimulationConfig,
        kick: Option<(BodyMotion, f64)>,
    ) -> Solver {
        let projector = Projector::new(&state, &cfg);
        let scratch = Intermediate {
            u: state.u.clone(),
            v: state.v.clone(),
        };
        Solver {
            cfg,
            state,
            projector,
            scratch,
            steps: 0,
            kick,
        }
    }

    pub fn state(&self) -> &FlowState {
        &self.state
    }

    pub fn config(&self) -> &SimulationConfig {
        &self.cfg
    }

    pub fn into_state(self) -> FlowState {
        self.state
    }

    pub fn steps_taken(&self) -> u64 {
        self.steps
    }

    pub fn cfl_dt(&self) -> Result<f64> {
        cfl_dt(&self.state, &self.cfg)
    }

    /// Advances by the Courant-limited step.
    pub fn step(&mut self) -> Result<StepReport> {
        let dt = self.cfl_dt()?;
        self.step_by(dt)
    }

    /// Advances by exactly `dt`.
    pub fn step_by(&mut self, dt: f64) -> Result<StepReport> {
        apply_boundary_conditions(&mut self.state, &self.cfg);
        momentum::predict_into(&self.state, &self.cfg, dt, self.steps, &mut self.scratch)?;
        let projection = project(
            &self.scratch,
            &mut self.state,
            dt,
            &self.cfg,
            &mut self.projector,
        )?;
        let motion = match self.kick {
            Some((motion, until)) if self.state.time < until => motion,
            _ => BodyMotion::AT_REST,
        };
        let (fx, fy) = enforce_body(&mut self.state, &self.cfg, dt, &motion);
        self.state.time += dt;
        self.steps += 1;
        if !self.state.all_finite() || self.state.max_speed() > BLOWUP_SPEED_RATIO * self.cfg.u_ref
        {
            return Err(Error::NumericalBlowup {
                step: self.steps,
                time: self.state.time,
                max_velocity: self.state.max_speed(),
            });
        }
        Ok(StepReport {
            dt,
            fx,
            fy,
            projection,
        })
    }

    pub(crate) fn set_time(&mut self, t: f64) {
        self.state.time = t;
    }
}
