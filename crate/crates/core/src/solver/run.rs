use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Shape;
use crate::grid::Grid;

use super::config::{SimulationConfig, SnapshotPolicy};
use super::state::FlowState;
use super::vorticity::FieldSnapshot;
use super::Solver;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForceSample {
    pub t: f64,
    /// Streamwise force per unit span, N/m.
    pub fx: f64,
    /// Cross-stream force per unit span, N/m.
    pub fy: f64,
}

/// Body forces sampled on a uniform time grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForceHistory {
    dt_sample: f64,
    samples: Vec<ForceSample>,
}

impl ForceHistory {
    /// Checks that sample times increase with spacing `dt_sample` (to 1e-12 s).
    pub fn new(dt_sample: f64, samples: Vec<ForceSample>) -> Result<Self> {
        if !(dt_sample > 0.0 && dt_sample.is_finite()) {
            return Err(Error::Sampling(format!(
                "sample spacing must be positive, got {dt_sample}"
            )));
        }
        for (k, w) in samples.windows(2).enumerate() {
            let gap = w[1].t - w[0].t;
            if (gap - dt_sample).abs() > 1e-12 {
                return Err(Error::Sampling(format!(
                    "samples {k} and {} are {gap:e} s apart, expected {dt_sample:e} s",
                    k + 1
                )));
            }
        }
        Ok(ForceHistory { dt_sample, samples })
    }

    pub fn dt_sample(&self) -> f64 {
        self.dt_sample
    }

    pub fn samples(&self) -> &[ForceSample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn fx(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.fx).collect()
    }

    pub fn fy(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.fy).collect()
    }

    /// Keeps samples from index `start` on.
    pub fn tail(&self, start: usize) -> ForceHistory {
        ForceHistory {
            dt_sample: self.dt_sample,
            samples: self.samples[start.min(self.samples.len())..].to_vec(),
        }
    }

    /// Multiplies every force component by `k`.
    pub fn scaled(&self, k: f64) -> ForceHistory {
        ForceHistory {
            dt_sample: self.dt_sample,
            samples: self
                .samples
                .iter()
                .map(|s| ForceSample {
                    t: s.t,
                    fx: k * s.fx,
                    fy: k * s.fy,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub history: ForceHistory,
    pub state: FlowState,
    pub snapshots: Vec<FieldSnapshot>,
    pub steps: u64,
    /// Largest divergence seen after any projection, relative to `u_ref/Δx`.
    pub max_relative_divergence: f64,
}

/// Progress notification, sent once per force sample.
#[derive(Debug, Clone, Copy)]
pub struct Progress {
    pub time: f64,
    pub t_end: f64,
    pub steps: u64,
    pub fx: f64,
    pub fy: f64,
}

pub fn run(shape: &Shape, cfg: &SimulationConfig, grid: Grid) -> Result<RunOutput> {
    run_with(shape, cfg, grid, |_| {})
}

/// Advances from the initial state until `t_end`.
///
/// Forces are sampled every `sample_every` reference steps, where the
/// reference step is the Courant step of the initial state. Between samples
/// the solver takes equal Courant-limited substeps landing exactly on the
/// sample time, and each sample holds the time-averaged force over its
/// interval.
pub fn run_with(
    shape: &Shape,
    cfg: &SimulationConfig,
    grid: Grid,
    mut progress: impl FnMut(Progress),
) -> Result<RunOutput> {
    if !(cfg.t_end > 0.0) {
        return Err(Error::EmptyRun(format!(
            "t_end must be positive, got {}",
            cfg.t_end
        )));
    }
    let mut solver = Solver::new(shape, cfg.clone(), grid)?;
    let reference_dt = solver.cfl_dt()?;
    let mut interval = reference_dt * cfg.sample_every as f64;
    if interval * 2.0 > cfg.t_end {
        interval = 0.5 * cfg.t_end;
    }
    let n_samples = (cfg.t_end / interval - 1e-9).ceil() as usize;
    let divergence_scale = cfg.u_ref / grid.min_spacing();

    let mut samples = Vec::with_capacity(n_samples);
    let mut snapshots = Vec::new();
    let mut next_snapshot = match cfg.snapshots {
        SnapshotPolicy::Every(every) => every,
        _ => f64::INFINITY,
    };
    let mut max_relative_divergence = 0.0f64;

    for k in 1..=n_samples {
        let t_start = (k - 1) as f64 * interval;
        let t_next = k as f64 * interval;
        let span = t_next - t_start;
        let substeps = (span / solver.cfl_dt()? * (1.0 - 1e-12)).ceil().max(1.0) as usize;
        let dt = span / substeps as f64;
        let (mut fx, mut fy) = (0.0, 0.0);
        for _ in 0..substeps {
            let report = solver.step_by(dt).map_err(|e| match e {
                Error::NumericalBlowup { step, .. } => Error::NumericalBlowup {
                    step,
                    time: solver.state().time,
                    max_velocity: solver.state().max_speed(),
                },
                other => other,
            })?;
            fx += report.fx;
            fy += report.fy;
            max_relative_divergence =
                max_relative_divergence.max(report.projection.max_divergence / divergence_scale);
        }
        solver.set_time(t_next);
        let sample = ForceSample {
            t: t_next,
            fx: fx / substeps as f64,
            fy: fy / substeps as f64,
        };
        samples.push(sample);
        while t_next >= next_snapshot - 1e-12 {
            snapshots.push(FieldSnapshot::capture(solver.state()));
            if let SnapshotPolicy::Every(every) = cfg.snapshots {
                next_snapshot += every;
            }
        }
        progress(Progress {
            time: t_next,
            t_end: cfg.t_end,
            steps: solver.steps_taken(),
            fx: sample.fx,
            fy: sample.fy,
        });
    }
    if cfg.snapshots == SnapshotPolicy::Final {
        snapshots.push(FieldSnapshot::capture(solver.state()));
    }

    let steps = solver.steps_taken();
    Ok(RunOutput {
        history: ForceHistory::new(interval, samples)?,
        state: solver.into_state(),
        snapshots,
        steps,
        max_relative_divergence,
    })
}
