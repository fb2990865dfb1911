use crate::geometry::Point;

use super::config::SimulationConfig;
use super::state::FlowState;

/// Rigid-body velocity prescribed inside the body.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BodyMotion {
    /// Angular velocity, rad/s, counter-clockwise positive.
    pub spin: f64,
    pub center: Point,
}

impl BodyMotion {
    pub const AT_REST: BodyMotion = BodyMotion {
        spin: 0.0,
        center: Point::new(0.0, 0.0),
    };

    #[inline]
    fn velocity(&self, p: Point) -> (f64, f64) {
        (
            -self.spin * (p.y - self.center.y),
            self.spin * (p.x - self.center.x),
        )
    }
}

/// Direct forcing: sets velocity on solid faces to the body velocity and
/// returns the force the fluid exerts on the body per unit span,
/// `F = Σ ρ (u − u_body) ΔxΔy / dt`. `Fx` is the drag direction, `Fy` lift.
pub fn enforce_body(
    state: &mut FlowState,
    cfg: &SimulationConfig,
    dt: f64,
    motion: &BodyMotion,
) -> (f64, f64) {
    let grid = state.grid;
    let scale = cfg.rho * grid.cell_area() / dt;
    let mut fx = 0.0;
    let mut fy = 0.0;
    if motion.spin == 0.0 {
        for &(i, j) in &state.body.u {
            let u = state.u.at_mut(i, j);
            fx += *u;
            *u = 0.0;
        }
        for &(i, j) in &state.body.v {
            let v = state.v.at_mut(i, j);
            fy += *v;
            *v = 0.0;
        }
    } else {
        for &(i, j) in &state.body.u {
            let (target, _) = motion.velocity(grid.u_face(i, j));
            let u = state.u.at_mut(i, j);
            fx += *u - target;
            *u = target;
        }
        for &(i, j) in &state.body.v {
            let (_, target) = motion.velocity(grid.v_face(i, j));
            let v = state.v.at_mut(i, j);
            fy += *v - target;
            *v = target;
        }
    }
    (fx * scale, fy * scale)
}
