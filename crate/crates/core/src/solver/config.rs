use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Kinematic viscosity of air used for the mast study, m²/s.
pub const AIR_KINEMATIC_VISCOSITY: f64 = 1.5e-5;

/// Empirical inlet profile `u(y) = (0.5 U / 0.1) (y + 0.05)`.
pub const SHEAR_SLOPE_FACTOR: f64 = 0.5 / 0.1;
pub const SHEAR_OFFSET: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum InletMode {
    #[default]
    Uniform,
    /// Linear height profile, clamped at zero.
    PaperShear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Boundaries {
    /// Inlet on x⁻, pressure outlet on x⁺, free-slip walls on y±.
    #[default]
    Channel,
    /// Doubly periodic box, for analytic verification cases.
    Periodic,
}

/// Brief rigid spin of the body at start-up. Breaks the mirror symmetry of
/// the initial flow so shedding develops within a few convective times.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StartupKick {
    /// Surface speed as a fraction of the reference speed.
    pub surface_speed: f64,
    /// Spin duration, s.
    pub duration: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case", tag = "mode", content = "interval")]
pub enum SnapshotPolicy {
    #[default]
    Disabled,
    /// One snapshot of the final state.
    Final,
    /// A snapshot every `interval` seconds of simulated time.
    Every(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    /// Inlet reference speed, m/s.
    pub u_ref: f64,
    /// Kinematic viscosity, m²/s.
    pub nu: f64,
    pub inlet_mode: InletMode,
    /// Profile slope per unit reference speed, 1/m.
    pub shear_slope_factor: f64,
    /// Profile height offset, m.
    pub shear_offset: f64,
    /// Density; only scales forces.
    pub rho: f64,
    pub cfl: f64,
    /// Simulated time, s.
    pub t_end: f64,
    /// Force sampling interval in multiples of the initial timestep.
    pub sample_every: usize,
    /// Divergence tolerance relative to `u_ref / Δx`.
    pub poisson_tolerance: f64,
    /// Cap on multigrid cycles per projection.
    pub poisson_max_iterations: usize,
    /// Weight of central differencing in the advection term; the rest is upwind.
    pub advection_blend: f64,
    pub boundaries: Boundaries,
    pub startup_kick: Option<StartupKick>,
    pub snapshots: SnapshotPolicy,
}

impl SimulationConfig {
    pub fn new(u_ref: f64) -> Self {
        SimulationConfig {
            u_ref,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(self.u_ref > 0.0 && self.u_ref.is_finite()) {
            return bad(format!(
                "reference speed must be positive, got {}",
                self.u_ref
            ));
        }
        if !(self.nu > 0.0 && self.nu.is_finite()) {
            return bad(format!("viscosity must be positive, got {}", self.nu));
        }
        if !(self.rho > 0.0 && self.rho.is_finite()) {
            return bad(format!("density must be positive, got {}", self.rho));
        }
        if !(self.cfl > 0.0 && self.cfl.is_finite()) {
            return bad(format!("Courant number must be positive, got {}", self.cfl));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return bad(format!(
                "t_end must be finite and non-negative, got {}",
                self.t_end
            ));
        }
        if self.sample_every == 0 {
            return bad("sample_every must be at least 1".into());
        }
        if !(self.poisson_tolerance > 0.0) || self.poisson_max_iterations == 0 {
            return bad("Poisson tolerance and iteration cap must be positive".into());
        }
        if !(0.0..=1.0).contains(&self.advection_blend) {
            return bad(format!(
                "advection blend must lie in [0, 1], got {}",
                self.advection_blend
            ));
        }
        if let Some(kick) = self.startup_kick {
            if !(kick.duration >= 0.0 && kick.surface_speed.is_finite()) {
                return bad("startup kick needs a non-negative duration".into());
            }
        }
        if let SnapshotPolicy::Every(interval) = self.snapshots {
            if !(interval > 0.0) {
                return bad(format!(
                    "snapshot interval must be positive, got {interval}"
                ));
            }
        }
        Ok(())
    }

    /// Courant bound `0 < cfl ≤ 1` of the explicit scheme. Kept separate from
    /// [`validate`](Self::validate) so unstable runs can be requested on purpose.
    pub fn check_cfl_bound(&self) -> Result<()> {
        if self.cfl > 1.0 {
            return Err(Error::InvalidConfig(format!(
                "Courant number must lie in (0, 1], got {}",
                self.cfl
            )));
        }
        Ok(())
    }
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig {
            u_ref: 1.0,
            nu: AIR_KINEMATIC_VISCOSITY,
            inlet_mode: InletMode::Uniform,
            shear_slope_factor: SHEAR_SLOPE_FACTOR,
            shear_offset: SHEAR_OFFSET,
            rho: 1.0,
            cfl: 0.2,
            t_end: 1.0,
            sample_every: 2,
            poisson_tolerance: 1e-6,
            poisson_max_iterations: 10_000,
            advection_blend: 0.9,
            boundaries: Boundaries::Channel,
            startup_kick: None,
            snapshots: SnapshotPolicy::Disabled,
        }
    }
}

/// Inlet velocity at height `y` (m above the domain floor) for reference
/// speed `u_ref`.
pub fn inlet_profile(u_ref: f64, y: f64, cfg: &SimulationConfig) -> f64 {
    match cfg.inlet_mode {
        InletMode::Uniform => u_ref,
        InletMode::PaperShear => (cfg.shear_slope_factor * u_ref * (y + cfg.shear_offset)).max(0.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn shear() -> SimulationConfig {
        SimulationConfig {
            inlet_mode: InletMode::PaperShear,
            ..Default::default()
        }
    }

    #[test]
    fn shear_profile_values() {
        let cfg = shear();
        assert_abs_diff_eq!(inlet_profile(1.0, 0.05, &cfg), 0.5, epsilon = 1e-15);
        assert_eq!(inlet_profile(1.0, -0.05, &cfg), 0.0);
        assert_eq!(inlet_profile(1.0, -0.2, &cfg), 0.0);
        // 11.5 × 0.05
        assert_abs_diff_eq!(inlet_profile(2.3, 0.0, &cfg), 0.575, epsilon = 1e-12);
    }

    #[test]
    fn uniform_profile_is_flat() {
        let cfg = SimulationConfig::default();
        assert_eq!(inlet_profile(3.0, 0.7, &cfg), 3.0);
    }

    #[test]
    fn validation() {
        assert!(SimulationConfig::new(1.0).validate().is_ok());
        assert!(SimulationConfig::new(0.0).validate().is_err());
        let cfg = SimulationConfig {
            nu: -1.0,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
        let cfg = SimulationConfig {
            cfl: 5.0,
            ..Default::default()
        };
        assert!(cfg.validate().is_ok());
        assert!(cfg.check_cfl_bound().is_err());
    }
}
