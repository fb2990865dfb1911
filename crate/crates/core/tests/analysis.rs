use std::f64::consts::PI;

use mastflow::analysis::*;
use mastflow::reference::{reported_table, REPORTED};
use mastflow::solver::{ForceHistory, ForceSample};
use mastflow::Error;
use proptest::prelude::*;

fn history(dt: f64, n: usize, f: impl Fn(f64) -> (f64, f64)) -> ForceHistory {
    let samples = (0..n)
        .map(|k| {
            let t = k as f64 * dt;
            let (fx, fy) = f(t);
            ForceSample { t, fx, fy }
        })
        .collect();
    ForceHistory::new(dt, samples).unwrap()
}

fn tone(dt: f64, n: usize, freq: f64, phase: f64) -> Vec<f64> {
    (0..n)
        .map(|k| (2.0 * PI * freq * k as f64 * dt + phase).sin())
        .collect()
}

proptest! {
    #[test]
    fn coefficients_are_scale_invariant(
        k in 0.1..10.0f64, mean in 0.5..3.0f64, amp in 0.1..2.0f64, freq in 1.0..5.0f64,
    ) {
        let h = history(0.01, 2000, |t| (mean, amp * (2.0 * PI * freq * t).sin()));
        let scales = CaseScales { u: 1.0, d: 0.1, nu: 1.5e-5, rho: 1.2 };
        let base = summarize(&h, "x", scales, 0.5).unwrap();
        let scaled = summarize(&h.scaled(k), "x", scales, 0.5).unwrap();
        prop_assert!((base.drift() - scaled.drift()).abs() <= 1e-12 * base.drift().abs().max(1.0));
        prop_assert!((scaled.cd / base.cd - k).abs() < 1e-9 * k);
        prop_assert!((base.frequency_hz - scaled.frequency_hz).abs() < 1e-12 * base.frequency_hz);
    }

    #[test]
    fn spectral_and_crossing_frequencies_agree(freq in 0.5..20.0f64, phase in 0.0..6.3f64) {
        let dt = 0.005;
        // at least ten periods
        let n = ((12.0 / freq / dt) as usize).max(256);
        let y = tone(dt, n, freq, phase);
        let bin = 1.0 / (n as f64 * dt);
        let spectral = dominant_frequency(&y, dt).unwrap();
        let crossing = zero_crossing_frequency(&y, dt).unwrap();
        prop_assert!((spectral - freq).abs() < bin, "spectral {spectral} vs {freq}");
        prop_assert!((crossing - spectral).abs() < bin, "crossing {crossing} vs {spectral}");
    }

    #[test]
    fn summarize_is_pure(freq in 1.0..5.0f64) {
        let h = history(0.01, 1000, |t| (1.0 + 0.1 * t.cos(), (2.0 * PI * freq * t).sin()));
        let before = h.clone();
        let scales = CaseScales { u: 2.0, d: 0.05, nu: 1.5e-5, rho: 1.0 };
        let a = summarize(&h, "MD1", scales, 0.3).unwrap();
        let b = summarize(&h, "MD1", scales, 0.3).unwrap();
        prop_assert_eq!(&h, &before);
        prop_assert_eq!(a, b);
    }
}

#[test]
fn summary_of_a_pure_tone() {
    let (u, d, rho) = (2.0, 0.05, 1.2);
    let q = 0.5 * rho * u * u * d;
    let h = history(0.002, 10_000, |t| {
        (1.2 * q, 0.4 * q * (2.0 * PI * 8.0 * t).sin())
    });
    let s = summarize(
        &h,
        "MD2",
        CaseScales {
            u,
            d,
            nu: 1.5e-5,
            rho,
        },
        0.5,
    )
    .unwrap();
    assert!((s.cd - 1.2).abs() < 1e-12);
    assert!((s.cl - 0.4).abs() < 1e-3, "{}", s.cl);
    assert!((s.frequency_hz - 8.0).abs() < 0.1);
    assert!((s.strouhal - 0.2).abs() < 0.0025);
    assert!((s.reynolds - u * d / 1.5e-5).abs() < 1e-6);
    assert!((s.drift() - s.cl / s.cd).abs() == 0.0);
    let mean = mean_lift_coefficient(&trim_transient(&h, 0.5).unwrap(), u, d, rho).unwrap();
    assert!(mean.abs() < 1e-3);
}

#[test]
fn failure_modes() {
    let scales = CaseScales {
        u: 1.0,
        d: 0.1,
        nu: 1e-5,
        rho: 1.0,
    };
    let short = history(0.01, 20, |t| (1.0, t.sin()));
    assert!(matches!(
        summarize(&short, "x", scales, 0.5),
        Err(Error::InsufficientData(_))
    ));
    assert!(matches!(
        trim_transient(&short, 1.0),
        Err(Error::InvalidConfig(_))
    ));
    let no_drag = history(0.01, 200, |t| (0.0, t.sin()));
    assert!(matches!(
        summarize(&no_drag, "x", scales, 0.5),
        Err(Error::DivisionDomain(_))
    ));
    assert!(matches!(
        drift_coefficient(0.3, 0.0),
        Err(Error::DivisionDomain(_))
    ));
    let flat = vec![0.25; 512];
    assert_eq!(dominant_frequency(&flat, 0.01).unwrap(), 0.0);
}

#[test]
fn reported_drift_matches_its_definition() {
    assert_eq!(REPORTED.len(), 15);
    for row in REPORTED.iter() {
        let drift = drift_coefficient(row.cl, row.cd).unwrap();
        assert!(
            (drift - row.drift).abs() <= 0.01,
            "{} at {} m/s: {drift} vs {}",
            row.design,
            row.speed,
            row.drift
        );
    }
    let table = reported_table();
    assert_eq!(table.rows.len(), 15);
}
