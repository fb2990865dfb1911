//! JSON run configuration.

use std::fs;
use std::path::Path;

use mastflow::campaign::{DesignCase, RunLength, SweepPlan, DEFAULT_SPEEDS, DEFAULT_TARGET_SPEED};
use mastflow::domain::DomainSpec;
use mastflow::geometry::{DesignTag, Shape};
use mastflow::solver::{InletMode, SimulationConfig, SnapshotPolicy, StartupKick};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

/// A design given by tag (`"MD2"`) or as a named shape.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DesignEntry {
    Tag(String),
    Custom { name: String, shape: Shape },
}

impl DesignEntry {
    pub fn name(&self) -> &str {
        match self {
            DesignEntry::Tag(tag) => tag,
            DesignEntry::Custom { name, .. } => name,
        }
    }

    pub fn resolve(&self) -> mastflow::Result<DesignCase> {
        match self {
            DesignEntry::Tag(tag) => Ok(tag.parse::<DesignTag>()?.into()),
            DesignEntry::Custom { name, shape } => Ok(DesignCase::new(name.clone(), shape.clone())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PoissonSettings {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PoissonSettings {
    fn default() -> Self {
        let sim = SimulationConfig::default();
        PoissonSettings {
            tol: sim.poisson_tolerance,
            max_iter: sim.poisson_max_iterations,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KickSettings {
    /// Surface speed over `U`.
    pub surface_speed: f64,
    /// Duration in `D/U`.
    pub duration_convective: f64,
}

/// Every key of the config file. Absent keys take the mast-study defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    pub designs: Vec<DesignEntry>,
    pub speeds: Vec<f64>,
    pub target_speed: f64,
    pub nu: f64,
    pub rho: f64,
    pub cfl: f64,
    /// Simulated seconds per case; when absent, `t_end_convective` applies.
    pub t_end: Option<f64>,
    /// Simulated time per case in units of `D/U`.
    pub t_end_convective: f64,
    pub sample_every: usize,
    pub grid: DomainSpec,
    pub inlet_mode: InletMode,
    pub shear_slope_factor: f64,
    pub shear_offset: f64,
    pub transient_fraction: f64,
    pub poisson: PoissonSettings,
    pub advection_blend: f64,
    pub startup_kick: Option<KickSettings>,
    /// Prescribed Reynolds number; overrides `nu` per case.
    pub re_surrogate: Option<f64>,
    /// Snapshot interval in `D/U` used when snapshots are requested.
    pub snapshot_every_convective: Option<f64>,
    pub seed_note: String,
}

impl Default for ConfigFile {
    fn default() -> Self {
        let sim = SimulationConfig::default();
        let plan = SweepPlan::default();
        let kick = plan.startup_kick.expect("default plan has a kick");
        ConfigFile {
            designs: DesignTag::ALL
                .iter()
                .map(|t| DesignEntry::Tag(t.to_string()))
                .collect(),
            speeds: DEFAULT_SPEEDS.to_vec(),
            target_speed: DEFAULT_TARGET_SPEED,
            nu: sim.nu,
            rho: sim.rho,
            cfl: sim.cfl,
            t_end: None,
            t_end_convective: match plan.run_length {
                RunLength::Convective(n) => n,
                RunLength::Seconds(_) => unreachable!("default run length is convective"),
            },
            sample_every: sim.sample_every,
            grid: DomainSpec::default(),
            inlet_mode: sim.inlet_mode,
            shear_slope_factor: sim.shear_slope_factor,
            shear_offset: sim.shear_offset,
            transient_fraction: plan.transient_fraction,
            poisson: PoissonSettings::default(),
            advection_blend: sim.advection_blend,
            startup_kick: Some(KickSettings {
                surface_speed: kick.surface_speed,
                duration_convective: kick.duration,
            }),
            re_surrogate: None,
            snapshot_every_convective: None,
            seed_note: String::new(),
        }
    }
}

/// A parsed and validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Loaded {
    pub file: ConfigFile,
    pub plan: SweepPlan,
}

impl Loaded {
    /// Solver settings shared by all cases (before per-case speed and time).
    pub fn config(&self) -> &SimulationConfig {
        &self.plan.base
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.plan.domain
    }
}

impl ConfigFile {
    pub fn from_json(text: &str) -> Result<ConfigFile, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            CliError::Config(format!("at `{path}`: {}", e.into_inner()))
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// SHA-256 of the canonical form: all keys present, objects key-sorted,
    /// no whitespace. Equal for configs that differ only in key order or in
    /// spelling out defaults.
    pub fn digest(&self) -> String {
        let value = serde_json::to_value(self).expect("config serializes");
        let canonical = serde_json::to_string(&value).expect("value serializes");
        let hash = Sha256::digest(canonical.as_bytes());
        hash.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn to_plan(&self) -> Result<SweepPlan, CliError> {
        let designs = self
            .designs
            .iter()
            .map(DesignEntry::resolve)
            .collect::<mastflow::Result<Vec<_>>>()?;
        let base = SimulationConfig {
            u_ref: self.speeds.first().copied().unwrap_or(1.0),
            nu: self.nu,
            inlet_mode: self.inlet_mode,
            shear_slope_factor: self.shear_slope_factor,
            shear_offset: self.shear_offset,
            rho: self.rho,
            cfl: self.cfl,
            t_end: self.t_end.unwrap_or(1.0),
            sample_every: self.sample_every,
            poisson_tolerance: self.poisson.tol,
            poisson_max_iterations: self.poisson.max_iter,
            advection_blend: self.advection_blend,
            ..Default::default()
        };
        if let Some(t) = self.t_end {
            if !(t > 0.0) {
                return Err(CliError::Config(format!("t_end must be positive, got {t}")));
            }
        }
        if let Some(every) = self.snapshot_every_convective {
            if !(every > 0.0) {
                return Err(CliError::Config(format!(
                    "snapshot_every_convective must be positive, got {every}"
                )));
            }
        }
        let plan = SweepPlan {
            designs,
            speeds: self.speeds.clone(),
            target_speed: self.target_speed,
            base,
            domain: self.grid,
            run_length: match self.t_end {
                Some(t) => RunLength::Seconds(t),
                None => RunLength::Convective(self.t_end_convective),
            },
            re_surrogate: self.re_surrogate,
            startup_kick: self.startup_kick.map(|k| StartupKick {
                surface_speed: k.surface_speed,
                duration: k.duration_convective,
            }),
            snapshots: SnapshotPolicy::Disabled,
            transient_fraction: self.transient_fraction,
            parallelism: 1,
        };
        plan.validate()?;
        Ok(plan)
    }

    /// Snapshot policy when snapshots are switched on: periodic if an
    /// interval is configured, otherwise the final state only.
    pub fn snapshot_policy(&self) -> SnapshotPolicy {
        match self.snapshot_every_convective {
            Some(every) => SnapshotPolicy::Every(every),
            None => SnapshotPolicy::Final,
        }
    }
}

pub fn parse_str(text: &str) -> Result<Loaded, CliError> {
    let file = ConfigFile::from_json(text)?;
    let plan = file.to_plan()?;
    Ok(Loaded { file, plan })
}

/// Reads and validates a config file; `None` gives the defaults.
pub fn parse_config(path: Option<&Path>) -> Result<Loaded, CliError> {
    match path {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            parse_str(&text)
        }
        None => parse_str("{}"),
    }
}
