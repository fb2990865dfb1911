use std::fs;
use std::path::{Path, PathBuf};

use mastflow::analysis::{summarize, CaseScales};
use mastflow::campaign::{
    emit_csv, emit_forces, emit_plots, emit_snapshots, format_sig, rank_designs, run_sweep_with,
    CaseArtifacts, SweepTable,
};
use mastflow::solver::{run_with, SnapshotPolicy};
use mastflow::verification::{run_suite, SuiteLevel};
use serde::Serialize;

use crate::config::{parse_config, ConfigFile, Loaded};
use crate::error::CliError;
use crate::manifest::{CaseStatus, RunManifest};

/// Options shared by `simulate` and `sweep`.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub config: Option<PathBuf>,
    pub out: PathBuf,
    pub snapshots: bool,
    pub re_surrogate: Option<f64>,
    /// Silences per-case progress on stderr.
    pub quiet: bool,
}

fn load(opts: &RunOptions) -> Result<Loaded, CliError> {
    let mut loaded = parse_config(opts.config.as_deref())?;
    if let Some(re) = opts.re_surrogate {
        loaded.file.re_surrogate = Some(re);
        loaded.plan = loaded.file.to_plan()?;
    }
    if opts.snapshots {
        loaded.plan.snapshots = loaded.file.snapshot_policy();
    }
    Ok(loaded)
}

fn create_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<PathBuf, CliError> {
    let text = serde_json::to_string_pretty(value).expect("output serializes") + "\n";
    fs::write(path, text).map_err(|e| CliError::io(path, e))?;
    Ok(path.to_path_buf())
}

#[derive(Serialize)]
struct SimulateSummary<'a> {
    design: &'a str,
    #[serde(rename = "U_mps")]
    u: f64,
    steps: u64,
    samples: usize,
    dt_sample: f64,
    max_relative_divergence: f64,
    summary: Option<mastflow::analysis::CoefficientSummary>,
    drift: Option<f64>,
    summary_error: Option<String>,
}

/// One case: `forces.csv`, `summary.json`, optional snapshots, manifest.
pub fn simulate(opts: &RunOptions, design: &str, speed: f64) -> Result<(), CliError> {
    let loaded = load(opts)?;
    let case = loaded
        .plan
        .designs
        .iter()
        .find(|d| d.name == design)
        .cloned()
        .map(Ok)
        .unwrap_or_else(|| {
            design
                .parse::<mastflow::geometry::DesignTag>()
                .map(Into::into)
        })?;
    if !(speed > 0.0 && speed.is_finite()) {
        return Err(CliError::Usage(format!(
            "speed must be positive, got {speed}"
        )));
    }
    let cfg = loaded.plan.case_config(&case, speed)?;
    let (shape, grid) = loaded.plan.domain.place(&case.shape)?;
    create_dir(&opts.out)?;
    let mut manifest = RunManifest::start("simulate", loaded.file.digest());

    let quiet = opts.quiet;
    let mut last_percent = 0;
    let out = run_with(&shape, &cfg, grid, |p| {
        let percent = (100.0 * p.time / p.t_end) as u32;
        if !quiet && percent >= last_percent + 10 {
            last_percent = percent;
            eprintln!("  t = {:.4} s ({percent}%), {} steps", p.time, p.steps);
        }
    })?;

    let mut outputs = Vec::new();
    let forces = opts.out.join("forces.csv");
    emit_forces(&out.history, &forces)?;
    outputs.push(forces);

    let scales = CaseScales {
        u: speed,
        d: case.shape.frontal_width(),
        nu: cfg.nu,
        rho: cfg.rho,
    };
    let summary = summarize(
        &out.history,
        &case.name,
        scales,
        loaded.plan.transient_fraction,
    );
    let record = SimulateSummary {
        design: &case.name,
        u: speed,
        steps: out.steps,
        samples: out.history.len(),
        dt_sample: out.history.dt_sample(),
        max_relative_divergence: out.max_relative_divergence,
        drift: summary.as_ref().ok().map(|s| s.drift()),
        summary_error: summary.as_ref().err().map(|e| e.to_string()),
        summary: summary.ok(),
    };
    outputs.push(write_json(&opts.out.join("summary.json"), &record)?);

    if opts.snapshots {
        let artifacts = [CaseArtifacts {
            design: case.name.clone(),
            u: speed,
            history: out.history.clone(),
            snapshots: out.snapshots,
        }];
        outputs.extend(emit_snapshots(&artifacts, &opts.out.join("snapshots"))?);
    }
    manifest.record_outputs(&opts.out, &outputs);
    manifest.finish(&opts.out)?;
    Ok(())
}

#[derive(Serialize)]
struct RankingFile {
    target_speed: f64,
    criterion: &'static str,
    ranking: Vec<mastflow::campaign::RankedDesign>,
    error: Option<String>,
}

const RANKING_CRITERION: &str =
    "drift coefficient CL/CD linearly interpolated to the target speed; ties by frequency, then name";

/// CSV, plots and ranking for a table. Deterministic in the table contents.
fn emit_report(
    table: &SweepTable,
    target_speed: f64,
    out: &Path,
) -> Result<Vec<PathBuf>, CliError> {
    let mut outputs = Vec::new();
    let csv = out.join("table.csv");
    emit_csv(table, &csv)?;
    outputs.push(csv);
    if table.summaries().next().is_some() {
        outputs.extend(emit_plots(table, out)?);
    }
    let ranking = rank_designs(table, target_speed);
    let file = RankingFile {
        target_speed,
        criterion: RANKING_CRITERION,
        error: ranking.as_ref().err().map(|e| e.to_string()),
        ranking: ranking.unwrap_or_default(),
    };
    outputs.push(write_json(&out.join("ranking.json"), &file)?);
    Ok(outputs)
}

fn case_file_stem(design: &str, u: f64) -> String {
    format!("{design}_{}mps", format_sig(u, 6))
}

/// The full design × speed study.
pub fn sweep(opts: &RunOptions, workers: usize) -> Result<(), CliError> {
    let mut loaded = load(opts)?;
    if workers == 0 {
        return Err(CliError::Usage("--workers must be at least 1".into()));
    }
    loaded.plan.parallelism = workers;
    create_dir(&opts.out)?;
    let digest = loaded.file.digest();
    let mut manifest = RunManifest::start("sweep", digest.clone());
    manifest.notes.push(format!("ranking: {RANKING_CRITERION}"));

    let quiet = opts.quiet;
    let output = run_sweep_with(&loaded.plan, |done| {
        if !quiet {
            let row = done.row;
            let status = match (&row.summary, &row.error) {
                (Some(s), _) => format!(
                    "f = {:.4} Hz, CL = {:.4}, CD = {:.4}",
                    s.frequency_hz, s.cl, s.cd
                ),
                (None, Some(e)) => format!("FAILED: {e}"),
                (None, None) => "no result".into(),
            };
            eprintln!(
                "[{}/{}] {} at {} m/s ({:.1} s): {status}",
                done.finished, done.total, row.design, row.u, row.wall_seconds
            );
        }
    })?;
    let mut table = output.table;
    table.provenance.config_digest = digest;

    let mut outputs = emit_report(&table, loaded.plan.target_speed, &opts.out)?;
    outputs.push(write_json(&opts.out.join("table.json"), &table)?);
    outputs.push(write_json(&opts.out.join("config.json"), &loaded.file)?);
    let forces_dir = opts.out.join("forces");
    for case in &output.artifacts {
        let path = forces_dir.join(format!("{}.csv", case_file_stem(&case.design, case.u)));
        emit_forces(&case.history, &path)?;
        outputs.push(path);
    }
    if loaded.plan.snapshots != SnapshotPolicy::Disabled {
        outputs.extend(emit_snapshots(
            &output.artifacts,
            &opts.out.join("snapshots"),
        )?);
    }

    manifest.cases = table.rows.iter().map(CaseStatus::from).collect();
    manifest.record_outputs(&opts.out, &outputs);
    manifest.finish(&opts.out)?;

    let failed: Vec<_> = table.rows.iter().filter(|r| !r.is_ok()).collect();
    if failed.is_empty() {
        return Ok(());
    }
    let list = failed
        .iter()
        .map(|r| format!("{}@{}", r.design, r.u))
        .collect::<Vec<_>>()
        .join(", ");
    let message = format!("{} case(s) failed: {list}", failed.len());
    if failed.iter().any(|r| r.numerical_failure) {
        Err(CliError::Numerical(message))
    } else {
        Err(CliError::Failed(message))
    }
}

/// Re-emits CSV, plots and ranking from a stored `table.json`.
pub fn report(table_path: &Path, out: &Path, target_speed: Option<f64>) -> Result<(), CliError> {
    let text = fs::read_to_string(table_path).map_err(|e| CliError::io(table_path, e))?;
    let table: SweepTable = serde_json::from_str(&text).map_err(|e| {
        CliError::Usage(format!(
            "{} is not a sweep table: {e}",
            table_path.display()
        ))
    })?;
    let target = target_speed.unwrap_or(mastflow::campaign::DEFAULT_TARGET_SPEED);
    create_dir(out)?;
    let mut manifest = RunManifest::start("report", table.provenance.config_digest.clone());
    let outputs = emit_report(&table, target, out)?;
    manifest.cases = table.rows.iter().map(CaseStatus::from).collect();
    manifest.record_outputs(out, &outputs);
    manifest.finish(out)?;
    Ok(())
}

/// Prints the verification table; fails if any check fails.
pub fn verify(quick: bool, out: Option<&Path>) -> Result<(), CliError> {
    let level = if quick {
        SuiteLevel::Quick
    } else {
        SuiteLevel::Full
    };
    println!("{:<28} {:<6} detail", "check", "result");
    let checks = run_suite(level, |c| {
        println!(
            "{:<28} {:<6} {}",
            c.name,
            if c.passed { "PASS" } else { "FAIL" },
            c.detail
        );
    });
    if let Some(out) = out {
        create_dir(out)?;
        let mut manifest = RunManifest::start("verify", ConfigFile::default().digest());
        let path = write_json(&out.join("verification.json"), &checks)?;
        manifest.record_outputs(out, &[path]);
        manifest.finish(out)?;
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    if failed > 0 {
        return Err(CliError::Failed(format!(
            "{failed} of {} checks failed",
            checks.len()
        )));
    }
    Ok(())
}
