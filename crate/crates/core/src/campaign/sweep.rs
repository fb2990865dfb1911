use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::analysis::{summarize, CaseScales, CoefficientSummary};
use crate::error::{Error, Result};
use crate::solver::{run, FieldSnapshot, ForceHistory};

use super::plan::{DesignCase, SweepPlan};

/// Outcome of one (design, speed) case. Exactly one of `summary` and
/// `error` is set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseRow {
    pub design: String,
    #[serde(rename = "U_mps")]
    pub u: f64,
    pub summary: Option<CoefficientSummary>,
    pub error: Option<String>,
    /// True when the failure was numerical (blowup, stalled pressure solve).
    #[serde(default)]
    pub numerical_failure: bool,
    pub steps: u64,
    /// Wall time of the case; not part of the serialized table.
    #[serde(skip)]
    pub wall_seconds: f64,
}

impl CaseRow {
    pub fn is_ok(&self) -> bool {
        self.summary.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Provenance {
    /// Content hash of the configuration that produced the table.
    pub config_digest: String,
    pub code_version: String,
}

/// The design comparison table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub rows: Vec<CaseRow>,
    pub provenance: Provenance,
}

impl SweepTable {
    /// Table from rows, sorted by (design, speed). Rejects duplicate keys.
    pub fn new(mut rows: Vec<CaseRow>, provenance: Provenance) -> Result<SweepTable> {
        rows.sort_by(|a, b| a.design.cmp(&b.design).then(a.u.total_cmp(&b.u)));
        if let Some(w) = rows
            .windows(2)
            .find(|w| w[0].design == w[1].design && w[0].u == w[1].u)
        {
            return Err(Error::Campaign(format!(
                "duplicate case {} at {} m/s",
                w[0].design, w[0].u
            )));
        }
        Ok(SweepTable { rows, provenance })
    }

    pub fn summaries(&self) -> impl Iterator<Item = &CoefficientSummary> {
        self.rows.iter().filter_map(|r| r.summary.as_ref())
    }

    /// Distinct design names in table order.
    pub fn designs(&self) -> Vec<&str> {
        let mut names: Vec<&str> = self.rows.iter().map(|r| r.design.as_str()).collect();
        names.dedup();
        names
    }

    /// Copy with every force scaled by `k`; coefficient magnitudes scale by
    /// `k`, ratios are unchanged.
    pub fn with_forces_scaled(&self, k: f64) -> SweepTable {
        let mut table = self.clone();
        for row in &mut table.rows {
            if let Some(s) = &mut row.summary {
                s.cl *= k;
                s.cd *= k;
            }
        }
        table
    }
}

/// Per-case artifacts kept alongside the table.
#[derive(Debug, Clone)]
pub struct CaseArtifacts {
    pub design: String,
    pub u: f64,
    pub history: ForceHistory,
    pub snapshots: Vec<FieldSnapshot>,
}

#[derive(Debug, Clone)]
pub struct SweepOutput {
    pub table: SweepTable,
    /// Artifacts of the successful cases, in table order.
    pub artifacts: Vec<CaseArtifacts>,
}

/// Progress notice sent when a case finishes.
#[derive(Debug, Clone)]
pub struct CaseDone<'a> {
    pub row: &'a CaseRow,
    pub finished: usize,
    pub total: usize,
}

pub fn run_sweep(plan: &SweepPlan) -> Result<SweepTable> {
    Ok(run_sweep_with(plan, |_| {})?.table)
}

fn run_case(
    plan: &SweepPlan,
    design: &DesignCase,
    u: f64,
) -> Result<(CoefficientSummary, CaseArtifacts, u64)> {
    let cfg = plan.case_config(design, u)?;
    let (shape, grid) = plan.domain.place(&design.shape)?;
    let out = run(&shape, &cfg, grid)?;
    let scales = CaseScales {
        u,
        d: design.shape.frontal_width(),
        nu: cfg.nu,
        rho: cfg.rho,
    };
    let summary = summarize(&out.history, &design.name, scales, plan.transient_fraction)?;
    let artifacts = CaseArtifacts {
        design: design.name.clone(),
        u,
        history: out.history,
        snapshots: out.snapshots,
    };
    Ok((summary, artifacts, out.steps))
}

type Slot = (CaseRow, Option<CaseArtifacts>);

/// Runs every case on a pool of `plan.parallelism` threads.
///
/// Cases are handed out in table order and results are stored by case
/// index, so the output does not depend on scheduling. A failed case becomes
/// a row carrying its error; the sweep fails only if every case does.
pub fn run_sweep_with(
    plan: &SweepPlan,
    on_case: impl Fn(CaseDone<'_>) + Sync,
) -> Result<SweepOutput> {
    plan.validate()?;
    let cases = plan.cases();
    let total = cases.len();
    let next = AtomicUsize::new(0);
    let finished = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Slot>>> = Mutex::new(vec![None; total]);

    let worker = || loop {
        let k = next.fetch_add(1, Ordering::Relaxed);
        let Some(&(design, u)) = cases.get(k) else {
            break;
        };
        let start = Instant::now();
        let outcome = run_case(plan, design, u);
        let wall_seconds = start.elapsed().as_secs_f64();
        let (row, artifacts) = match outcome {
            Ok((summary, artifacts, steps)) => (
                CaseRow {
                    design: design.name.clone(),
                    u,
                    summary: Some(summary),
                    error: None,
                    numerical_failure: false,
                    steps,
                    wall_seconds,
                },
                Some(artifacts),
            ),
            Err(e) => (
                CaseRow {
                    design: design.name.clone(),
                    u,
                    summary: None,
                    error: Some(e.to_string()),
                    numerical_failure: e.is_numerical(),
                    steps: 0,
                    wall_seconds,
                },
                None,
            ),
        };
        on_case(CaseDone {
            row: &row,
            finished: finished.fetch_add(1, Ordering::Relaxed) + 1,
            total,
        });
        slots.lock().expect("no worker panicked")[k] = Some((row, artifacts));
    };

    let workers = plan.parallelism.min(total).max(1);
    std::thread::scope(|scope| {
        for _ in 1..workers {
            scope.spawn(worker);
        }
        worker();
    });

    let mut rows = Vec::with_capacity(total);
    let mut artifacts = Vec::new();
    for slot in slots.into_inner().expect("no worker panicked") {
        let (row, art) = slot.expect("every case ran");
        rows.push(row);
        artifacts.extend(art);
    }
    if rows.iter().all(|r| !r.is_ok()) {
        let first = rows[0].error.clone().unwrap_or_default();
        return Err(Error::Campaign(format!(
            "all {total} cases failed; first: {first}"
        )));
    }
    let provenance = Provenance {
        config_digest: String::new(),
        code_version: env!("CARGO_PKG_VERSION").to_string(),
    };
    Ok(SweepOutput {
        table: SweepTable::new(rows, provenance)?,
        artifacts,
    })
}
