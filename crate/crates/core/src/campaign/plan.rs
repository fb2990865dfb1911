use serde::{Deserialize, Serialize};

use crate::domain::DomainSpec;
use crate::error::{Error, Result};
use crate::geometry::{design, DesignTag, Shape};
use crate::solver::{SimulationConfig, SnapshotPolicy, StartupKick};

/// Wind speeds of the mast study, m/s.
pub const DEFAULT_SPEEDS: [f64; 5] = [1.0, 2.0, 3.0, 4.0, 5.0];
/// Monthly mean site wind speed used to rank designs, m/s.
pub const DEFAULT_TARGET_SPEED: f64 = 2.3;

/// A named body section.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignCase {
    pub name: String,
    pub shape: Shape,
}

impl DesignCase {
    pub fn new(name: impl Into<String>, shape: Shape) -> Self {
        DesignCase {
            name: name.into(),
            shape,
        }
    }
}

impl From<DesignTag> for DesignCase {
    fn from(tag: DesignTag) -> Self {
        DesignCase::new(tag.as_str(), design(tag))
    }
}

/// How long each case runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunLength {
    /// Simulated seconds, the same for every case.
    Seconds(f64),
    /// Convective times `D/U`, so every case sees the same number of
    /// shedding cycles regardless of speed and size.
    Convective(f64),
}

/// Design × speed sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPlan {
    pub designs: Vec<DesignCase>,
    pub speeds: Vec<f64>,
    pub target_speed: f64,
    /// Template for every case; `u_ref`, `t_end`, the start-up kick and the
    /// snapshot policy are filled in per case.
    pub base: SimulationConfig,
    pub domain: DomainSpec,
    pub run_length: RunLength,
    /// Prescribed Reynolds number; replaces `base.nu` with `U D / Re`.
    pub re_surrogate: Option<f64>,
    /// Kick duration in convective times.
    pub startup_kick: Option<StartupKick>,
    /// Snapshot interval in convective times.
    pub snapshots: SnapshotPolicy,
    pub transient_fraction: f64,
    pub parallelism: usize,
}

impl Default for SweepPlan {
    fn default() -> Self {
        SweepPlan {
            designs: DesignTag::ALL.into_iter().map(DesignCase::from).collect(),
            speeds: DEFAULT_SPEEDS.to_vec(),
            target_speed: DEFAULT_TARGET_SPEED,
            base: SimulationConfig::default(),
            domain: DomainSpec::default(),
            run_length: RunLength::Convective(150.0),
            re_surrogate: None,
            startup_kick: Some(StartupKick {
                surface_speed: 0.5,
                duration: 2.0,
            }),
            snapshots: SnapshotPolicy::Disabled,
            transient_fraction: 0.5,
            parallelism: 1,
        }
    }
}

impl SweepPlan {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.designs.is_empty() {
            return bad("at least one design is required".into());
        }
        let mut names: Vec<&str> = self.designs.iter().map(|d| d.name.as_str()).collect();
        names.sort_unstable();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return bad("design names must be unique".into());
        }
        if self.speeds.is_empty() {
            return bad("at least one speed is required".into());
        }
        if self.speeds.iter().any(|&u| !(u > 0.0 && u.is_finite())) {
            return bad(format!("speeds must be positive, got {:?}", self.speeds));
        }
        if self.speeds.windows(2).any(|w| w[1] <= w[0]) {
            return bad(format!(
                "speeds must be strictly ascending, got {:?}",
                self.speeds
            ));
        }
        if !(self.target_speed > 0.0 && self.target_speed.is_finite()) {
            return bad(format!(
                "target speed must be positive, got {}",
                self.target_speed
            ));
        }
        match self.run_length {
            RunLength::Seconds(t) | RunLength::Convective(t) if !(t > 0.0 && t.is_finite()) => {
                return bad(format!("run length must be positive, got {t}"));
            }
            _ => {}
        }
        if let Some(re) = self.re_surrogate {
            if !(re > 0.0 && re.is_finite()) {
                return bad(format!(
                    "surrogate Reynolds number must be positive, got {re}"
                ));
            }
        }
        if !(0.0..1.0).contains(&self.transient_fraction) {
            return bad(format!(
                "transient fraction must lie in [0, 1), got {}",
                self.transient_fraction
            ));
        }
        if self.parallelism == 0 {
            return bad("parallelism must be at least 1".into());
        }
        for d in &self.designs {
            self.domain.place(&d.shape)?;
        }
        self.case_config(&self.designs[0], self.speeds[0])?
            .validate()
    }

    /// Solver settings of one case.
    pub fn case_config(&self, design: &DesignCase, speed: f64) -> Result<SimulationConfig> {
        let d = design.shape.frontal_width();
        if !(d > 0.0) {
            return Err(Error::InvalidGeometry(format!(
                "design {} has no frontal width",
                design.name
            )));
        }
        let time_unit = d / speed;
        let mut cfg = self.base.clone();
        cfg.u_ref = speed;
        if let Some(re) = self.re_surrogate {
            cfg.nu = speed * d / re;
        }
        cfg.t_end = match self.run_length {
            RunLength::Seconds(t) => t,
            RunLength::Convective(n) => n * time_unit,
        };
        cfg.startup_kick = self.startup_kick.map(|k| StartupKick {
            surface_speed: k.surface_speed,
            duration: k.duration * time_unit,
        });
        cfg.snapshots = match self.snapshots {
            SnapshotPolicy::Every(n) => SnapshotPolicy::Every(n * time_unit),
            other => other,
        };
        Ok(cfg)
    }

    /// Cases in table order: by design name, then speed.
    pub fn cases(&self) -> Vec<(&DesignCase, f64)> {
        let mut designs: Vec<&DesignCase> = self.designs.iter().collect();
        designs.sort_by(|a, b| a.name.cmp(&b.name));
        designs
            .into_iter()
            .flat_map(|d| self.speeds.iter().map(move |&u| (d, u)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_plan_is_full_study() {
        let plan = SweepPlan::default();
        plan.validate().unwrap();
        assert_eq!(plan.cases().len(), 15);
        assert_eq!(plan.target_speed, 2.3);
        assert_eq!(plan.base.nu, 1.5e-5);
    }

    #[test]
    fn case_config_scales_with_design() {
        let plan = SweepPlan {
            re_surrogate: Some(100.0),
            ..Default::default()
        };
        let md1 = DesignCase::from(DesignTag::Md1);
        let cfg = plan.case_config(&md1, 2.0).unwrap();
        assert_eq!(cfg.u_ref, 2.0);
        assert!((cfg.nu - 2.0 * 0.05 / 100.0).abs() < 1e-15);
        assert!((cfg.t_end - 150.0 * 0.025).abs() < 1e-12);
        assert!((cfg.startup_kick.unwrap().duration - 0.05).abs() < 1e-15);
    }

    #[test]
    fn invalid_plans() {
        let cases = [
            SweepPlan {
                speeds: vec![-1.0],
                ..Default::default()
            },
            SweepPlan {
                speeds: vec![2.0, 1.0],
                ..Default::default()
            },
            SweepPlan {
                speeds: vec![],
                ..Default::default()
            },
            SweepPlan {
                designs: vec![],
                ..Default::default()
            },
            SweepPlan {
                parallelism: 0,
                ..Default::default()
            },
            SweepPlan {
                transient_fraction: 1.0,
                ..Default::default()
            },
        ];
        for plan in cases {
            assert!(
                matches!(plan.validate(), Err(Error::InvalidConfig(_))),
                "{plan:?}"
            );
        }
    }
}
