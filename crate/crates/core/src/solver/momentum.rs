use crate::error::{Error, Result};

use super::config::{Boundaries, SimulationConfig};
use super::field::Field;
use super::state::{fill_velocity_boundaries, FlowState, OutletFace};

/// Tentative velocities of the fractional step, before projection.
#[derive(Debug, Clone, PartialEq)]
pub struct Intermediate {
    pub u: Field,
    pub v: Field,
}

/// Blend of central and first-order upwind differences for `a ∂q/∂s`.
#[inline(always)]
fn advective_derivative(a: f64, q_minus: f64, q: f64, q_plus: f64, h: f64, blend: f64) -> f64 {
    let central = (q_plus - q_minus) / (2.0 * h);
    let upwind = if a > 0.0 {
        (q - q_minus) / h
    } else {
        (q_plus - q) / h
    };
    a * (blend * central + (1.0 - blend) * upwind)
}

/// Face index ranges updated by the momentum equations: `(u_i, v_j)` start
/// and end (exclusive). Boundary faces outside the ranges are set by the
/// boundary conditions.
fn active_ranges(cfg: &SimulationConfig, nx: usize, ny: usize) -> ((usize, usize), (usize, usize)) {
    match cfg.boundaries {
        Boundaries::Channel => ((1, nx), (1, ny)),
        Boundaries::Periodic => ((0, nx), (0, ny)),
    }
}

/// Explicit Euler advance of advection and diffusion: `u* = u + dt (−(u·∇)u + ν∇²u)`.
pub fn predict_velocity(
    state: &FlowState,
    cfg: &SimulationConfig,
    dt: f64,
    step_index: u64,
) -> Result<Intermediate> {
    let mut out = Intermediate {
        u: state.u.clone(),
        v: state.v.clone(),
    };
    predict_into(state, cfg, dt, step_index, &mut out)?;
    Ok(out)
}

pub(crate) fn predict_into(
    state: &FlowState,
    cfg: &SimulationConfig,
    dt: f64,
    step_index: u64,
    out: &mut Intermediate,
) -> Result<()> {
    let grid = &state.grid;
    let (nx, ny) = (grid.nx, grid.ny);
    let (dx, dy) = (grid.dx, grid.dy);
    let (idx2, idy2) = (1.0 / (dx * dx), 1.0 / (dy * dy));
    let nu = cfg.nu;
    let blend = cfg.advection_blend;
    let ((ui0, ui1), (vj0, vj1)) = active_ranges(cfg, nx, ny);

    let u = state.u.raw();
    let v = state.v.raw();
    let su = state.u.stride();
    let sv = state.v.stride();
    out.u.copy_from(&state.u);
    out.v.copy_from(&state.v);

    {
        let us = out.u.raw_mut();
        for j in 0..ny {
            for i in ui0..ui1 {
                let k = (j + 1) * su + i + 1;
                // v around x-face (i, j): cells i-1 and i, faces j and j+1
                let kv = (j + 1) * sv + i + 1;
                let vbar = 0.25 * (v[kv - 1] + v[kv] + v[kv + sv - 1] + v[kv + sv]);
                let c = u[k];
                let (w, e, s, n) = (u[k - 1], u[k + 1], u[k - su], u[k + su]);
                let adv = advective_derivative(c, w, c, e, dx, blend)
                    + advective_derivative(vbar, s, c, n, dy, blend);
                let lap = (w + e - 2.0 * c) * idx2 + (s + n - 2.0 * c) * idy2;
                us[k] = c + dt * (nu * lap - adv);
            }
        }
    }
    {
        let vs = out.v.raw_mut();
        for j in vj0..vj1 {
            for i in 0..nx {
                let k = (j + 1) * sv + i + 1;
                // u around y-face (i, j): rows j-1 and j, faces i and i+1
                let ku = (j + 1) * su + i + 1;
                let ubar = 0.25 * (u[ku - su] + u[ku - su + 1] + u[ku] + u[ku + 1]);
                let c = v[k];
                let (w, e, s, n) = (v[k - 1], v[k + 1], v[k - sv], v[k + sv]);
                let adv = advective_derivative(ubar, w, c, e, dx, blend)
                    + advective_derivative(c, s, c, n, dy, blend);
                let lap = (w + e - 2.0 * c) * idx2 + (s + n - 2.0 * c) * idy2;
                vs[k] = c + dt * (nu * lap - adv);
            }
        }
    }

    if !(out.u.all_finite() && out.v.all_finite()) {
        return Err(Error::NumericalBlowup {
            step: step_index,
            time: state.time,
            max_velocity: state.max_speed(),
        });
    }
    fill_velocity_boundaries(&mut out.u, &mut out.v, grid, cfg, OutletFace::Extrapolate);
    Ok(())
}
