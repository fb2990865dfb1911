use std::f64::consts::PI;

use mastflow::domain::DomainSpec;
use mastflow::geometry::{Point, Shape};
use mastflow::solver::{ForceHistory, ForceSample};
use mastflow::verification::*;
use mastflow::Error;

#[test]
fn order_of_exact_power_laws() {
    let h = [0.1, 0.05, 0.025];
    for p in [1.0, 2.0, 3.5] {
        let e: Vec<f64> = h.iter().map(|h: &f64| 7.0 * h.powf(p)).collect();
        assert!((convergence_order(&e, &h).unwrap() - p).abs() < 1e-12);
    }
    assert!(matches!(
        convergence_order(&[1.0, 0.5], &[0.1, 0.05]),
        Err(Error::InsufficientData(_))
    ));
}

#[test]
fn taylor_green_is_second_order() {
    let report = taylor_green_convergence(&[16, 32, 64], 1.0, TAYLOR_GREEN_NU).unwrap();
    assert!(report.observed_order >= 1.8, "{report:?}");
    assert!(report.errors.windows(2).all(|w| w[1] < w[0]));
    let tg = TaylorGreen {
        n: 32,
        nu: TAYLOR_GREEN_NU,
    }
    .run(1.0)
    .unwrap();
    assert!((tg.energy_ratio - 1.0).abs() < 0.01, "{}", tg.energy_ratio);
}

fn synthetic(amplitude: f64) -> ForceHistory {
    let dt = 0.01;
    let samples = (0..2000)
        .map(|k| {
            let t = k as f64 * dt;
            ForceSample {
                t,
                fx: 1.0,
                fy: amplitude * (2.0 * PI * 2.0 * t).sin() + 1e-6,
            }
        })
        .collect();
    ForceHistory::new(dt, samples).unwrap()
}

#[test]
fn oscillation_criteria() {
    let c = OnsetCriteria::default();
    assert!(lift_oscillates(&synthetic(0.3), &c).unwrap());
    assert!(!lift_oscillates(&synthetic(1e-4), &c).unwrap());
    let empty = ForceHistory::new(0.01, vec![]).unwrap();
    assert!(matches!(
        lift_oscillates(&empty, &c),
        Err(Error::InsufficientData(_))
    ));
}

#[test]
fn onset_is_monotone_in_reynolds_number() {
    // a coarser domain than the default keeps this quick; the full-size
    // check runs in the acceptance suite
    let case = SurrogateCase {
        domain: DomainSpec {
            nx: 128,
            ny: 64,
            ..Default::default()
        },
        t_end_convective: 120.0,
        ..Default::default()
    };
    let circle = Shape::circle(Point::default(), 0.1).unwrap();
    let c = OnsetCriteria::default();
    let results: Vec<bool> = [20.0, 150.0, 250.0]
        .iter()
        .map(|&re| shedding_onset_check_with(&circle, re, &case, &c).unwrap())
        .collect();
    assert_eq!(results, [false, true, true]);
    assert!(matches!(
        case.config(&circle, -1.0),
        Err(Error::InvalidConfig(_))
    ));
}

#[test]
fn quick_suite_passes() {
    let mut seen = 0;
    let checks = run_suite(SuiteLevel::Quick, |_| seen += 1);
    assert_eq!(seen, checks.len());
    assert!(checks.len() >= 5);
    for c in &checks {
        assert!(c.passed, "{c:?}");
    }
}
