//! Exit criteria. Each prints one PASS/FAIL line; the process fails if any
//! criterion fails. The sweep-based criteria take roughly a quarter hour.

use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use mastflow::analysis::{
    dominant_frequency, drift_coefficient, mean_lift_coefficient, summarize, trim_transient,
    zero_crossing_frequency, zero_crossings, CaseScales,
};
use mastflow::campaign::{rank_designs, SweepTable};
use mastflow::geometry::{design, DesignTag};
use mastflow::reference::REPORTED;
use mastflow::solver::run;
use mastflow::verification::{
    lift_oscillates, taylor_green_convergence, OnsetCriteria, SurrogateCase, TaylorGreen,
};
use mastflow_cli::manifest::RunManifest;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    label: String,
    passed: bool,
    detail: String,
}

#[derive(Default)]
struct Ledger(Vec<Outcome>);

impl Ledger {
    fn record(&mut self, label: &str, passed: bool, detail: String) {
        let line = format!(
            "{:<14} {} {detail}\n",
            label,
            if passed { "PASS" } else { "FAIL" }
        );
        let mut err = std::io::stderr().lock();
        let _ = err.write_all(line.as_bytes());
        let _ = err.flush();
        self.0.push(Outcome {
            label: label.into(),
            passed,
            detail,
        });
    }
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

fn taylor_green(ledger: &mut Ledger) {
    let start = Instant::now();
    let report = taylor_green_convergence(&[32, 64, 128], 1.0, 0.1);
    let energy = TaylorGreen { n: 128, nu: 0.1 }.run(1.0);
    let elapsed = start.elapsed();
    match (report, energy) {
        (Ok(r), Ok(e)) => {
            let passed = r.observed_order >= 1.8
                && (e.energy_ratio - 1.0).abs() <= 0.01
                && elapsed < Duration::from_secs(120);
            ledger.record(
                "criterion 1",
                passed,
                format!(
                    "Taylor-Green order {:.3} (need >= 1.8), errors {:?}, energy ratio {:.6} at n=128 (need within 1%), {:.1} s (need < 120 s)",
                    r.observed_order,
                    r.errors.iter().map(|e| format!("{e:.3e}")).collect::<Vec<_>>(),
                    e.energy_ratio,
                    secs(elapsed)
                ),
            );
        }
        (r, e) => ledger.record("criterion 1", false, format!("run failed: {r:?} {e:?}")),
    }
}

/// Re=150 circle at 256×128: divergence invariant and shedding benchmark.
fn circle_benchmark(ledger: &mut Ledger) {
    let start = Instant::now();
    // 200 D/U of steady shedding after trimming half
    let case = SurrogateCase {
        t_end_convective: 400.0,
        ..Default::default()
    };
    let circle = design(DesignTag::Id);
    let d = circle.frontal_width();
    let result = case.config(&circle, 150.0).and_then(|cfg| {
        let (placed, grid) = case.domain.place(&circle)?;
        assert_eq!((grid.nx, grid.ny), (256, 128));
        Ok((run(&placed, &cfg, grid)?, cfg))
    });
    let elapsed = start.elapsed();
    let (out, cfg) = match result {
        Ok(r) => r,
        Err(e) => {
            ledger.record("criterion 2", false, format!("run failed: {e}"));
            ledger.record("criterion 3", false, format!("run failed: {e}"));
            return;
        }
    };
    ledger.record(
        "criterion 2",
        out.max_relative_divergence <= 1e-6,
        format!(
            "max |div u| dx/U over {} projections = {:.3e} (need <= 1e-6)",
            out.steps, out.max_relative_divergence
        ),
    );

    let scales = CaseScales {
        u: cfg.u_ref,
        d,
        nu: cfg.nu,
        rho: cfg.rho,
    };
    let criteria = OnsetCriteria::default();
    let checked = (|| -> mastflow::Result<_> {
        let summary = summarize(&out.history, "circle", scales, criteria.transient_fraction)?;
        let steady = trim_transient(&out.history, criteria.transient_fraction)?;
        let mean_cl = mean_lift_coefficient(&steady, scales.u, d, scales.rho)?;
        let crossings = zero_crossings(&steady.fy(), steady.dt_sample()).len();
        let periodic = lift_oscillates(&out.history, &criteria)?;
        Ok((summary, mean_cl, crossings, periodic))
    })();
    match checked {
        Ok((s, mean_cl, crossings, periodic)) => {
            let periods = crossings.saturating_sub(1) / 2;
            let passed = periodic
                && periods >= 30
                && (0.15..=0.22).contains(&s.strouhal)
                && mean_cl.abs() <= 0.05
                && (1.1..=1.7).contains(&s.cd)
                && elapsed <= Duration::from_secs(600);
            ledger.record(
                "criterion 3",
                passed,
                format!(
                    "St {:.4} in [0.15, 0.22], mean CL {mean_cl:+.4} within 0.05, CD {:.4} in [1.1, 1.7], {periods} periods (need >= 30), periodic {periodic}, CL amplitude {:.4}, {:.0} s (need <= 600 s)",
                    s.strouhal,
                    s.cd,
                    s.cl,
                    secs(elapsed)
                ),
            );
        }
        Err(e) => ledger.record("criterion 3", false, format!("analysis failed: {e}")),
    }
}

fn reported_arithmetic(ledger: &mut Ledger) {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut worst_row = String::new();
    for r in REPORTED.iter() {
        let drift = drift_coefficient(r.cl, r.cd).unwrap_or(f64::INFINITY);
        if (drift - r.drift).abs() >= worst {
            worst = (drift - r.drift).abs();
            worst_row = format!("{}@{}", r.design, r.speed);
        }
    }
    let elapsed = start.elapsed();
    ledger.record(
        "criterion 4",
        worst <= 0.01 && REPORTED.len() == 15 && elapsed < Duration::from_secs(1),
        format!("15 rows, max |CL/CD - printed drift| = {worst:.4} at {worst_row} (need <= 0.01)"),
    );
}

fn mastflow(dir: &Path, args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_mastflow"))
        .current_dir(dir)
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if out.status.success() {
        Ok(())
    } else {
        Err(format!(
            "exit {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr).trim()
        ))
    }
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR"))
        .join("acceptance")
        .join(name);
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn by_design<'a>(
    table: &'a SweepTable,
    name: &str,
) -> Vec<(f64, &'a mastflow::analysis::CoefficientSummary)> {
    table
        .rows
        .iter()
        .filter(|r| r.design == name)
        .filter_map(|r| r.summary.as_ref().map(|s| (r.u, s)))
        .collect()
}

/// The full mast study at the default fidelity settings.
fn fidelity_sweep(ledger: &mut Ledger) -> Option<PathBuf> {
    let dir = scratch("fidelity");
    fs::write(dir.join("config.json"), "{}").unwrap();
    let start = Instant::now();
    let status = mastflow(
        &dir,
        &[
            "sweep",
            "--config",
            "config.json",
            "--out",
            "out",
            "--workers",
            "1",
            "-q",
        ],
    );
    let elapsed = start.elapsed();
    let table: Option<SweepTable> = fs::read(dir.join("out/table.json"))
        .ok()
        .and_then(|b| serde_json::from_slice(&b).ok());
    let Some(table) = table else {
        for part in ["(a)", "(b)", "(c)", "(d)"] {
            ledger.record(
                &format!("criterion 5{part}"),
                false,
                format!("sweep failed: {status:?}"),
            );
        }
        ledger.record("criterion 6", false, format!("sweep failed: {status:?}"));
        return None;
    };
    let complete = status.is_ok() && table.rows.len() == 15 && table.rows.iter().all(|r| r.is_ok());
    let on_time = elapsed <= Duration::from_secs(3600);
    let runtime = format!("15 cases in {:.0} s (need <= 3600 s)", secs(elapsed));

    let designs = ["ID", "MD1", "MD2"];
    let series: Vec<_> = designs.iter().map(|d| by_design(&table, d)).collect();
    let freq_line = |i: usize| {
        series[i]
            .iter()
            .map(|(u, s)| format!("{u}:{:.2}", s.frequency_hz))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let drift_line = |i: usize| {
        series[i]
            .iter()
            .map(|(u, s)| format!("{u}:{:.3}", s.drift()))
            .collect::<Vec<_>>()
            .join(" ")
    };

    let rising = series.iter().all(|rows| {
        rows.windows(2)
            .all(|w| w[1].1.frequency_hz > w[0].1.frequency_hz)
    });
    ledger.record(
        "criterion 5(a)",
        complete && on_time && rising,
        format!(
            "f rises with U for each design; f [Hz] ID {} | MD1 {} | MD2 {}; {runtime}",
            freq_line(0),
            freq_line(1),
            freq_line(2)
        ),
    );

    let at = |i: usize, u: f64| series[i].iter().find(|(v, _)| *v == u).map(|(_, s)| *s);
    let speeds: Vec<f64> = series[0].iter().map(|(u, _)| *u).collect();
    let mut ordered = complete;
    let mut drift_best = complete;
    for &u in &speeds {
        match (at(0, u), at(1, u), at(2, u)) {
            (Some(id), Some(md1), Some(md2)) => {
                ordered &=
                    md2.frequency_hz > md1.frequency_hz && md1.frequency_hz > id.frequency_hz;
                drift_best &= md2.drift() > id.drift() && md2.drift() > md1.drift();
            }
            _ => {
                ordered = false;
                drift_best = false;
            }
        }
    }
    ledger.record(
        "criterion 5(b)",
        ordered,
        "f(MD2) > f(MD1) > f(ID) at every speed".into(),
    );
    ledger.record(
        "criterion 5(c)",
        drift_best,
        format!(
            "drift(MD2) above ID and MD1 at every speed; CL/CD ID {} | MD1 {} | MD2 {}",
            drift_line(0),
            drift_line(1),
            drift_line(2)
        ),
    );
    match rank_designs(&table, 2.3) {
        Ok(ranking) => ledger.record(
            "criterion 5(d)",
            ranking[0].design == "MD2",
            format!(
                "ranking at 2.3 m/s: {}",
                ranking
                    .iter()
                    .map(|r| format!("{} {:.3}", r.design, r.drift))
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
        ),
        Err(e) => ledger.record("criterion 5(d)", false, format!("ranking failed: {e}")),
    }

    let d = design(DesignTag::Id).frontal_width();
    let st: Vec<f64> = series[0]
        .iter()
        .map(|(u, s)| s.frequency_hz * d / u)
        .collect();
    let within = !st.is_empty() && st.iter().all(|s| (s - 0.2).abs() <= 0.4 * 0.2);
    ledger.record(
        "criterion 6",
        complete && within,
        format!(
            "ID St = f D / U per speed {:?} (need within 0.2 +/- 40%)",
            st.iter().map(|s| format!("{s:.3}")).collect::<Vec<_>>()
        ),
    );
    Some(dir.join("out"))
}

/// Files listed in a sweep's manifest, with their bytes.
fn listed_outputs(out: &Path) -> Result<Vec<(String, Vec<u8>)>, String> {
    let text = fs::read(out.join("manifest.json")).map_err(|e| e.to_string())?;
    let manifest: RunManifest = serde_json::from_slice(&text).map_err(|e| e.to_string())?;
    manifest
        .outputs
        .iter()
        .map(|o| {
            fs::read(out.join(o))
                .map(|b| (o.clone(), b))
                .map_err(|e| format!("{o}: {e}"))
        })
        .collect()
}

fn determinism(ledger: &mut Ledger, fidelity: Option<&Path>) {
    let dir = scratch("determinism");
    fs::write(
        dir.join("config.json"),
        r#"{"designs": ["ID", "MD2"], "speeds": [1]}"#,
    )
    .unwrap();
    let start = Instant::now();
    let runs = [("1", "serial"), ("4", "parallel")].map(|(workers, out)| {
        mastflow(
            &dir,
            &[
                "sweep",
                "--config",
                "config.json",
                "--out",
                out,
                "--workers",
                workers,
                "-q",
            ],
        )
    });
    let elapsed = start.elapsed();
    if let Some(e) = runs.iter().find_map(|r| r.as_ref().err()) {
        ledger.record("criterion 7", false, format!("sweep failed: {e}"));
        return;
    }
    let (serial, parallel) = match (
        listed_outputs(&dir.join("serial")),
        listed_outputs(&dir.join("parallel")),
    ) {
        (Ok(a), Ok(b)) => (a, b),
        (a, b) => {
            ledger.record(
                "criterion 7",
                false,
                format!("manifest unreadable: {:?} {:?}", a.err(), b.err()),
            );
            return;
        }
    };
    let same_list = serial
        .iter()
        .map(|f| &f.0)
        .eq(parallel.iter().map(|f| &f.0));
    let differing: Vec<&str> = serial
        .iter()
        .zip(&parallel)
        .filter(|(a, b)| a.1 != b.1)
        .map(|(a, _)| a.0.as_str())
        .collect();
    let has_csv = serial.iter().any(|f| f.0 == "table.csv");
    // the same cases inside the 15-case study produce the same force files
    let mut reused = 0;
    let mut mismatched = Vec::new();
    if let Some(fid) = fidelity {
        for (name, bytes) in serial.iter().filter(|f| f.0.starts_with("forces/")) {
            match fs::read(fid.join(name)) {
                Ok(b) if &b == bytes => reused += 1,
                _ => mismatched.push(name.clone()),
            }
        }
    }
    ledger.record(
        "criterion 7",
        same_list && has_csv && differing.is_empty() && mismatched.is_empty() && elapsed <= Duration::from_secs(300),
        format!(
            "workers 1 vs 4: {} listed outputs, differing {differing:?}; {reused} force files identical to the full study, mismatched {mismatched:?}; {:.0} s (need <= 300 s)",
            serial.len(),
            secs(elapsed)
        ),
    );
}

fn signal_oracle(ledger: &mut Ledger) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6d61_7374);
    let mut worst = 0.0f64;
    let mut agree = true;
    for _ in 0..20 {
        let f: f64 = rng.gen_range(0.5..25.0);
        let dt: f64 = rng.gen_range(0.002..0.01);
        let periods: f64 = rng.gen_range(10.0..60.0);
        let n = (periods / (f * dt)).ceil() as usize;
        let (amp, phase, offset) = (
            rng.gen_range(0.1..10.0),
            rng.gen_range(0.0..2.0 * PI),
            rng.gen_range(-5.0..5.0),
        );
        let y: Vec<f64> = (0..n)
            .map(|k| offset + amp * (2.0 * PI * f * k as f64 * dt + phase).sin())
            .collect();
        let bin = 1.0 / (n as f64 * dt);
        let spectral = dominant_frequency(&y, dt).unwrap_or(f64::NAN);
        worst = worst.max((spectral - f).abs() / bin);
        let centred: Vec<f64> = y.iter().map(|v| v - offset).collect();
        let crossing = zero_crossing_frequency(&centred, dt).unwrap_or(f64::NAN);
        agree &= (spectral - crossing).abs() < bin;
    }
    ledger.record(
        "criterion 8",
        worst < 1.0 && agree,
        format!("20 random tones: worst error {worst:.3} bins (need < 1), zero-crossing agreement {agree}"),
    );
}

fn main() {
    let only = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let wanted = |n: &str| only.as_deref().is_none_or(|o| o == n);
    let mut ledger = Ledger::default();
    if wanted("1") {
        taylor_green(&mut ledger);
    }
    if wanted("2") || wanted("3") {
        circle_benchmark(&mut ledger);
    }
    if wanted("4") {
        reported_arithmetic(&mut ledger);
    }
    let fidelity = if wanted("5") || wanted("6") || wanted("7") {
        fidelity_sweep(&mut ledger)
    } else {
        None
    };
    if wanted("7") {
        determinism(&mut ledger, fidelity.as_deref());
    }
    if wanted("8") {
        signal_oracle(&mut ledger);
    }

    let failed: Vec<&str> = ledger
        .0
        .iter()
        .filter(|o| !o.passed)
        .map(|o| o.label.as_str())
        .collect();
    println!(
        "acceptance: {} of {} passed",
        ledger.0.len() - failed.len(),
        ledger.0.len()
    );
    if !failed.is_empty() {
        println!("failed: {}", failed.join(", "));
        for o in ledger.0.iter().filter(|o| !o.passed) {
            println!("  {}: {}", o.label, o.detail);
        }
        std::process::exit(1);
    }
}
