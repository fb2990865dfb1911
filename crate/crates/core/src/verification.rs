//! Analytic and brute-force checks of the solver.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::analysis::zero_crossings;
use crate::domain::DomainSpec;
use crate::error::{Error, Result};
use crate::geometry::{Shape, SolidMask};
use crate::grid::Grid;
use crate::solver::{
    run, Boundaries, FlowState, ForceHistory, SimulationConfig, Solver, StartupKick,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub resolutions: Vec<usize>,
    pub errors: Vec<f64>,
    pub observed_order: f64,
}

/// Least-squares slope of `ln(error)` against `ln(spacing)`.
pub fn convergence_order(errors: &[f64], spacings: &[f64]) -> Result<f64> {
    if errors.len() != spacings.len() {
        return Err(Error::InvalidConfig(format!(
            "{} errors for {} spacings",
            errors.len(),
            spacings.len()
        )));
    }
    if errors.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "{} points, need at least 3",
            errors.len()
        )));
    }
    if errors
        .iter()
        .chain(spacings)
        .any(|&v| !(v > 0.0 && v.is_finite()))
    {
        return Err(Error::InvalidConfig(
            "errors and spacings must be positive".into(),
        ));
    }
    let xs: Vec<f64> = spacings.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidConfig(
            "spacings must not all be equal".into(),
        ));
    }
    Ok(sxy / sxx)
}

/// Decaying vortex array in a `2π × 2π` periodic box (`k = 1`).
pub struct TaylorGreen {
    pub n: usize,
    pub nu: f64,
}

/// Outcome of one Taylor–Green run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaylorGreenResult {
    /// RMS velocity error over all faces, in units of the initial peak speed.
    pub l2_error: f64,
    /// Simulated kinetic energy over the analytic value at `t_final`.
    pub energy_ratio: f64,
    pub steps: u64,
}

impl TaylorGreen {
    const CFL: f64 = 0.2;

    fn exact_u(x: f64, y: f64, decay: f64) -> f64 {
        -x.cos() * y.sin() * decay
    }

    fn exact_v(x: f64, y: f64, decay: f64) -> f64 {
        x.sin() * y.cos() * decay
    }

    pub fn config(&self) -> SimulationConfig {
        SimulationConfig {
            u_ref: 1.0,
            nu: self.nu,
            cfl: Self::CFL,
            advection_blend: 1.0,
            boundaries: Boundaries::Periodic,
            poisson_tolerance: 1e-10,
            ..Default::default()
        }
    }

    pub fn initial_state(&self) -> Result<FlowState> {
        if self.n < 16 {
            return Err(Error::InvalidConfig(format!(
                "need at least 16 cells per side, got {}",
                self.n
            )));
        }
        let grid = Grid::new(self.n, self.n, 2.0 * PI, 2.0 * PI)?;
        let mut state = FlowState::new(grid, SolidMask::empty(&grid));
        self.fill_exact(&mut state, 1.0);
        Ok(state)
    }

    fn fill_exact(&self, state: &mut FlowState, decay: f64) {
        let grid = state.grid;
        for j in 0..grid.ny {
            for i in 0..=grid.nx {
                let p = grid.u_face(i, j);
                *state.u.at_mut(i, j) = Self::exact_u(p.x, p.y, decay);
            }
        }
        for j in 0..=grid.ny {
            for i in 0..grid.nx {
                let p = grid.v_face(i, j);
                *state.v.at_mut(i, j) = Self::exact_v(p.x, p.y, decay);
            }
        }
    }

    fn error_against_exact(&self, state: &FlowState, decay: f64) -> f64 {
        let grid = state.grid;
        let mut sum = 0.0;
        let mut count = 0usize;
        for j in 0..grid.ny {
            for i in 0..grid.nx {
                let p = grid.u_face(i, j);
                sum += (state.u.at(i, j) - Self::exact_u(p.x, p.y, decay)).powi(2);
                let p = grid.v_face(i, j);
                sum += (state.v.at(i, j) - Self::exact_v(p.x, p.y, decay)).powi(2);
                count += 2;
            }
        }
        (sum / count as f64).sqrt()
    }

    /// Advances to `t_final` in equal steps no larger than the Courant step.
    pub fn run(&self, t_final: f64) -> Result<TaylorGreenResult> {
        let state = self.initial_state()?;
        let e0 = state.kinetic_energy();
        let mut solver = Solver::with_state(state, self.config())?;
        if t_final > 0.0 {
            let steps = (t_final / solver.cfl_dt()?).ceil() as usize;
            let dt = t_final / steps as f64;
            for _ in 0..steps {
                solver.step_by(dt)?;
            }
        }
        let decay = (-2.0 * self.nu * t_final).exp();
        let state = solver.state();
        Ok(TaylorGreenResult {
            l2_error: self.error_against_exact(state, decay),
            energy_ratio: state.kinetic_energy() / (e0 * decay * decay),
            steps: solver.steps_taken(),
        })
    }
}

/// RMS velocity error of the Taylor–Green vortex on an `n × n` grid at `t_final`.
pub fn taylor_green_error(n: usize, t_final: f64, nu: f64) -> Result<f64> {
    Ok(TaylorGreen { n, nu }.run(t_final)?.l2_error)
}

/// Taylor–Green errors across `resolutions` and the fitted order.
pub fn taylor_green_convergence(
    resolutions: &[usize],
    t_final: f64,
    nu: f64,
) -> Result<ConvergenceReport> {
    if resolutions.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidConfig(
            "resolutions must be strictly increasing".into(),
        ));
    }
    let errors = resolutions
        .iter()
        .map(|&n| taylor_green_error(n, t_final, nu))
        .collect::<Result<Vec<_>>>()?;
    let spacings: Vec<f64> = resolutions.iter().map(|&n| 2.0 * PI / n as f64).collect();
    let observed_order = convergence_order(&errors, &spacings)?;
    Ok(ConvergenceReport {
        resolutions: resolutions.to_vec(),
        errors,
        observed_order,
    })
}

/// Thresholds for calling a lift signal periodic shedding.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OnsetCriteria {
    pub min_zero_crossings: usize,
    /// Lift peak-to-peak over mean drag.
    pub min_amplitude_ratio: f64,
    pub transient_fraction: f64,
}

impl Default for OnsetCriteria {
    fn default() -> Self {
        OnsetCriteria {
            min_zero_crossings: 6,
            min_amplitude_ratio: 0.01,
            transient_fraction: 0.5,
        }
    }
}

/// Whether the trimmed lift history oscillates per `criteria`.
pub fn lift_oscillates(history: &ForceHistory, criteria: &OnsetCriteria) -> Result<bool> {
    let n = history.len();
    let steady = history.tail((criteria.transient_fraction * n as f64).ceil() as usize);
    if steady.is_empty() {
        return Err(Error::InsufficientData(
            "no samples left after trimming".into(),
        ));
    }
    let fy = steady.fy();
    let fx = steady.fx();
    let crossings = zero_crossings(&fy, steady.dt_sample()).len();
    let (lo, hi) = fy
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &f| {
            (lo.min(f), hi.max(f))
        });
    let mean_drag = fx.iter().sum::<f64>() / fx.len() as f64;
    Ok(crossings >= criteria.min_zero_crossings
        && hi - lo >= criteria.min_amplitude_ratio * mean_drag.abs())
}

/// Reynolds-surrogate run used by the onset check and the shedding benchmark.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurrogateCase {
    pub domain: DomainSpec,
    /// Simulated time in convective units `D/U`.
    pub t_end_convective: f64,
    pub u_ref: f64,
    pub cfl: f64,
    pub startup_kick: Option<StartupKick>,
}

impl Default for SurrogateCase {
    fn default() -> Self {
        SurrogateCase {
            domain: DomainSpec::default(),
            t_end_convective: 200.0,
            u_ref: 1.0,
            cfl: SimulationConfig::default().cfl,
            startup_kick: Some(StartupKick {
                surface_speed: 0.5,
                duration: 2.0,
            }),
        }
    }
}

impl SurrogateCase {
    /// Config for `shape` at Reynolds number `re`: `ν = U D / Re`, and the
    /// kick duration given in `D/U` scaled to seconds.
    pub fn config(&self, shape: &Shape, re: f64) -> Result<SimulationConfig> {
        if !(re > 0.0 && re.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "Reynolds number must be positive, got {re}"
            )));
        }
        let d = shape.frontal_width();
        let time_unit = d / self.u_ref;
        Ok(SimulationConfig {
            u_ref: self.u_ref,
            nu: self.u_ref * d / re,
            cfl: self.cfl,
            t_end: self.t_end_convective * time_unit,
            startup_kick: self.startup_kick.map(|k| StartupKick {
                surface_speed: k.surface_speed,
                duration: k.duration * time_unit,
            }),
            ..Default::default()
        })
    }

    pub fn run(&self, shape: &Shape, re: f64) -> Result<ForceHistory> {
        let cfg = self.config(shape, re)?;
        let (placed, grid) = self.domain.place(shape)?;
        Ok(run(&placed, &cfg, grid)?.history)
    }
}

/// Runs `shape` at Reynolds number `re` and reports whether the wake sheds.
pub fn shedding_onset_check(shape: &Shape, re: f64) -> Result<bool> {
    shedding_onset_check_with(
        shape,
        re,
        &SurrogateCase::default(),
        &OnsetCriteria::default(),
    )
}

pub fn shedding_onset_check_with(
    shape: &Shape,
    re: f64,
    case: &SurrogateCase,
    criteria: &OnsetCriteria,
) -> Result<bool> {
    let history = case.run(shape, re)?;
    lift_oscillates(&history, criteria)
}

/// One line of the verification table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: String) -> Check {
        Check {
            name: name.into(),
            passed,
            detail,
        }
    }

    fn failed(name: &str, err: &Error) -> Check {
        Check::new(name, false, format!("error: {err}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteLevel {
    /// Seconds: coarse Taylor–Green and the pure-arithmetic checks.
    Quick,
    /// Adds full-resolution Taylor–Green and the shedding-onset runs.
    Full,
}

/// Taylor–Green viscosity used by the suite, in box units.
pub const TAYLOR_GREEN_NU: f64 = 0.1;

/// Runs the solver and post-processing checks, reporting each through
/// `on_check` as it completes.
pub fn run_suite(level: SuiteLevel, mut on_check: impl FnMut(&Check)) -> Vec<Check> {
    let mut checks = Vec::new();
    let mut push = |c: Check| {
        on_check(&c);
        checks.push(c);
    };

    let resolutions: &[usize] = match level {
        SuiteLevel::Quick => &[16, 32, 64],
        SuiteLevel::Full => &[32, 64, 128],
    };
    push(
        match taylor_green_convergence(resolutions, 1.0, TAYLOR_GREEN_NU) {
            Ok(r) => Check::new(
                "taylor_green_order",
                r.observed_order >= 1.8,
                format!(
                    "order {:.3} over n = {:?} (need >= 1.8)",
                    r.observed_order, r.resolutions
                ),
            ),
            Err(e) => Check::failed("taylor_green_order", &e),
        },
    );
    let n = resolutions[resolutions.len() - 1];
    push(
        match (TaylorGreen {
            n,
            nu: TAYLOR_GREEN_NU,
        })
        .run(1.0)
        {
            Ok(r) => Check::new(
                "taylor_green_energy",
                (r.energy_ratio - 1.0).abs() <= 0.01,
                format!(
                    "E/E_exact = {:.6} at n = {n} (need within 1%)",
                    r.energy_ratio
                ),
            ),
            Err(e) => Check::failed("taylor_green_energy", &e),
        },
    );

    let mut worst = 0.0f64;
    let mut agree = true;
    for k in 0..20 {
        let f = 1.0 + 0.37 * k as f64;
        let dt = 1.0 / (f * (12.0 + k as f64));
        let n = (30.0 / (f * dt)).ceil() as usize;
        let phase = 0.3 * k as f64;
        let tone: Vec<f64> = (0..n)
            .map(|i| (2.0 * PI * f * i as f64 * dt + phase).sin())
            .collect();
        let bin = 1.0 / (n as f64 * dt);
        let spectral = crate::analysis::dominant_frequency(&tone, dt).unwrap_or(f64::NAN);
        let crossing = crate::analysis::zero_crossing_frequency(&tone, dt).unwrap_or(f64::NAN);
        worst = worst.max((spectral - f).abs() / bin);
        agree &= (spectral - crossing).abs() < bin;
    }
    push(Check::new(
        "spectral_frequency",
        worst < 1.0 && agree,
        format!("worst error {worst:.3} bins over 20 tones; zero-crossing agreement {agree}"),
    ));

    let mut worst = 0.0f64;
    for r in &crate::reference::REPORTED {
        match crate::analysis::drift_coefficient(r.cl, r.cd) {
            Ok(d) => worst = worst.max((d - r.drift).abs()),
            Err(_) => worst = f64::INFINITY,
        }
    }
    push(Check::new(
        "reported_drift_arithmetic",
        worst <= 0.01,
        format!("max |CL/CD - printed| = {worst:.4} over 15 rows (need <= 0.01)"),
    ));

    push(
        match crate::campaign::rank_designs(&crate::reference::reported_table(), 2.3) {
            Ok(ranking) => Check::new(
                "reported_ranking",
                ranking[0].design == "MD2",
                format!(
                    "first at 2.3 m/s: {} (drift {:.3})",
                    ranking[0].design, ranking[0].drift
                ),
            ),
            Err(e) => Check::failed("reported_ranking", &e),
        },
    );

    if level == SuiteLevel::Full {
        let circle = crate::geometry::design(crate::geometry::DesignTag::Id);
        for (name, re, expected) in [
            ("onset_circle_re150", 150.0, true),
            ("onset_circle_re20", 20.0, false),
        ] {
            push(match shedding_onset_check(&circle, re) {
                Ok(oscillating) => Check::new(
                    name,
                    oscillating == expected,
                    format!("oscillating = {oscillating} at Re = {re} (expected {expected})"),
                ),
                Err(e) => Check::failed(name, &e),
            });
        }
    }
    checks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::ForceSample;
    use approx::assert_abs_diff_eq;

    #[test]
    fn order_of_exact_power_laws() {
        let h = [1.0, 0.5, 0.25];
        assert_abs_diff_eq!(
            convergence_order(&[1.0, 0.25, 0.0625], &h).unwrap(),
            2.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            convergence_order(&[1.0, 0.5, 0.25], &h).unwrap(),
            1.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            convergence_order(&[0.3, 0.3, 0.3], &h).unwrap(),
            0.0,
            epsilon = 1e-12
        );
        assert!(matches!(
            convergence_order(&[1.0, 0.5], &[1.0, 0.5]),
            Err(Error::InsufficientData(_))
        ));
        assert!(convergence_order(&[1.0, 0.0, 0.5], &h).is_err());
    }

    #[test]
    fn taylor_green_initialization_is_exact() {
        assert!(taylor_green_error(16, 0.0, 0.1).unwrap() <= 1e-12);
        assert!(taylor_green_error(8, 0.0, 0.1).is_err());
    }

    #[test]
    fn taylor_green_error_falls_with_resolution() {
        let coarse = taylor_green_error(16, 0.5, 0.1).unwrap();
        let fine = taylor_green_error(32, 0.5, 0.1).unwrap();
        assert!(fine < coarse / 3.0, "{coarse} -> {fine}");
    }

    #[test]
    fn empty_trimmed_history_is_insufficient() {
        let history = ForceHistory::new(
            0.1,
            vec![ForceSample {
                t: 0.1,
                fx: 1.0,
                fy: 0.0,
            }],
        )
        .unwrap();
        let criteria = OnsetCriteria {
            transient_fraction: 1.0,
            ..Default::default()
        };
        assert!(matches!(
            lift_oscillates(&history, &criteria),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn synthetic_lift_classification() {
        let make = |amp: f64| {
            let samples = (1..=1000)
                .map(|k| {
                    let t = k as f64 * 0.05;
                    ForceSample {
                        t,
                        fx: 1.0,
                        fy: amp * (2.0 * PI * 0.2 * t + 0.3).sin(),
                    }
                })
                .collect();
            ForceHistory::new(0.05, samples).unwrap()
        };
        let criteria = OnsetCriteria::default();
        assert!(lift_oscillates(&make(0.3), &criteria).unwrap());
        assert!(!lift_oscillates(&make(0.001), &criteria).unwrap());
    }
}
