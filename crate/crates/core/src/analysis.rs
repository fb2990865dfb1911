//! Force-history post-processing: shedding frequency, lift and drag
//! coefficients, their ratio, and the Strouhal and Reynolds numbers.

use std::f64::consts::PI;

use rustfft::{num_complex::Complex, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solver::ForceHistory;

/// Fewest samples accepted by the spectral and statistical estimators.
pub const MIN_SAMPLES: usize = 16;

pub const DEFAULT_TRANSIENT_FRACTION: f64 = 0.5;

/// Drops the first `⌈fraction·N⌉` samples.
pub fn trim_transient(history: &ForceHistory, fraction: f64) -> Result<ForceHistory> {
    if !(0.0..1.0).contains(&fraction) {
        return Err(Error::InvalidConfig(format!(
            "transient fraction must lie in [0, 1), got {fraction}"
        )));
    }
    let n = history.len();
    let start = (fraction * n as f64).ceil() as usize;
    let trimmed = history.tail(start);
    if trimmed.len() < MIN_SAMPLES {
        return Err(Error::InsufficientData(format!(
            "{} samples left after trimming {start} of {n}, need {MIN_SAMPLES}",
            trimmed.len()
        )));
    }
    Ok(trimmed)
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Frequency (Hz) of the strongest spectral line of a uniformly sampled series.
///
/// The mean is removed and a Hann window applied before the DFT; the peak bin
/// is refined by a parabola through it and its two neighbors. Returns 0 when
/// the series has no fluctuation.
pub fn dominant_frequency(values: &[f64], dt: f64) -> Result<f64> {
    let n = values.len();
    if n < MIN_SAMPLES {
        return Err(Error::InsufficientData(format!(
            "{n} samples, need {MIN_SAMPLES}"
        )));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Sampling(format!(
            "sample spacing must be positive, got {dt}"
        )));
    }
    let m = mean(values);
    let rms_scale = (values.iter().map(|x| x * x).sum::<f64>() / n as f64).sqrt();
    let mut buf: Vec<Complex<f64>> = values
        .iter()
        .enumerate()
        .map(|(k, &x)| {
            let w = 0.5 * (1.0 - (2.0 * PI * k as f64 / n as f64).cos());
            Complex::new((x - m) * w, 0.0)
        })
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let mags: Vec<f64> = buf[..=n / 2].iter().map(|c| c.norm()).collect();

    let last = mags.len() - 1;
    let (peak, &peak_mag) = mags[1..last]
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(k, m)| (k + 1, m))
        .expect("at least 16 samples give interior bins");
    if peak_mag <= 1e-9 * rms_scale * n as f64 {
        return Ok(0.0);
    }
    let (a, b, c) = (mags[peak - 1], peak_mag, mags[peak + 1]);
    let curvature = a - 2.0 * b + c;
    let offset = if curvature < 0.0 {
        (0.5 * (a - c) / curvature).clamp(-0.5, 0.5)
    } else {
        0.0
    };
    Ok((peak as f64 + offset) / (n as f64 * dt))
}

/// Interpolated times at which the mean-removed series changes sign.
pub fn zero_crossings(values: &[f64], dt: f64) -> Vec<f64> {
    if values.is_empty() {
        return Vec::new();
    }
    let m = mean(values);
    let mut crossings = Vec::new();
    for (k, w) in values.windows(2).enumerate() {
        let (a, b) = (w[0] - m, w[1] - m);
        if (a < 0.0 && b >= 0.0) || (a >= 0.0 && b < 0.0) {
            let frac = a / (a - b);
            crossings.push((k as f64 + frac) * dt);
        }
    }
    crossings
}

/// Frequency from the spacing of zero crossings: two per period.
pub fn zero_crossing_frequency(values: &[f64], dt: f64) -> Result<f64> {
    let crossings = zero_crossings(values, dt);
    if crossings.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "{} zero crossings, need 3",
            crossings.len()
        )));
    }
    let span = crossings[crossings.len() - 1] - crossings[0];
    Ok((crossings.len() - 1) as f64 / (2.0 * span))
}

fn dynamic_pressure_width(u: f64, d: f64, rho: f64) -> Result<f64> {
    if !(u > 0.0 && d > 0.0 && rho > 0.0) {
        return Err(Error::Normalization(format!(
            "need positive U, D and ρ, got U = {u}, D = {d}, ρ = {rho}"
        )));
    }
    Ok(0.5 * rho * u * u * d)
}

/// `CD = mean(Fx) / (½ρU²D)`.
pub fn drag_coefficient(history: &ForceHistory, u: f64, d: f64, rho: f64) -> Result<f64> {
    let q = dynamic_pressure_width(u, d, rho)?;
    let fx = history.fx();
    if fx.is_empty() {
        return Err(Error::InsufficientData("empty force history".into()));
    }
    Ok(mean(&fx) / q)
}

/// `CL = √2 · rms(Fy − mean Fy) / (½ρU²D)`: the amplitude of the lift
/// oscillation, since the mean lift of a symmetric body vanishes.
pub fn lift_coefficient(history: &ForceHistory, u: f64, d: f64, rho: f64) -> Result<f64> {
    let q = dynamic_pressure_width(u, d, rho)?;
    let fy = history.fy();
    if fy.is_empty() {
        return Err(Error::InsufficientData("empty force history".into()));
    }
    let m = mean(&fy);
    let var = fy.iter().map(|f| (f - m).powi(2)).sum::<f64>() / fy.len() as f64;
    Ok(2f64.sqrt() * var.sqrt() / q)
}

/// Time-mean lift normalized like [`lift_coefficient`].
pub fn mean_lift_coefficient(history: &ForceHistory, u: f64, d: f64, rho: f64) -> Result<f64> {
    let q = dynamic_pressure_width(u, d, rho)?;
    let fy = history.fy();
    if fy.is_empty() {
        return Err(Error::InsufficientData("empty force history".into()));
    }
    Ok(mean(&fy) / q)
}

/// Drift coefficient (gliding ratio) `CL / CD`.
pub fn drift_coefficient(cl: f64, cd: f64) -> Result<f64> {
    if !(cd > 0.0) {
        return Err(Error::DivisionDomain(format!(
            "drift coefficient needs CD > 0, got {cd}"
        )));
    }
    Ok(cl / cd)
}

pub fn strouhal(frequency_hz: f64, d: f64, u: f64) -> f64 {
    frequency_hz * d / u
}

pub fn reynolds(u: f64, d: f64, nu: f64) -> f64 {
    u * d / nu
}

/// One row of the design comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSummary {
    pub design: String,
    #[serde(rename = "U_mps")]
    pub u: f64,
    pub frequency_hz: f64,
    pub cl: f64,
    pub cd: f64,
    pub strouhal: f64,
    pub reynolds: f64,
    pub transient_fraction: f64,
}

impl CoefficientSummary {
    /// `cl / cd`, recomputed on every call.
    pub fn drift(&self) -> f64 {
        self.cl / self.cd
    }
}

/// Physical inputs of a summary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaseScales {
    /// Reference speed, m/s.
    pub u: f64,
    /// Frontal width, m.
    pub d: f64,
    pub nu: f64,
    pub rho: f64,
}

pub fn summarize(
    history: &ForceHistory,
    design: &str,
    scales: CaseScales,
    transient_fraction: f64,
) -> Result<CoefficientSummary> {
    let CaseScales { u, d, nu, rho } = scales;
    if history.is_empty() {
        return Err(Error::InsufficientData("empty force history".into()));
    }
    let steady = trim_transient(history, transient_fraction)?;
    let cd = drag_coefficient(&steady, u, d, rho)?;
    let cl = lift_coefficient(&steady, u, d, rho)?;
    drift_coefficient(cl, cd)?;
    let frequency_hz = dominant_frequency(&steady.fy(), steady.dt_sample())?;
    Ok(CoefficientSummary {
        design: design.to_string(),
        u,
        frequency_hz,
        cl,
        cd,
        strouhal: strouhal(frequency_hz, d, u),
        reynolds: reynolds(u, d, nu),
        transient_fraction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::ForceSample;
    use approx::assert_abs_diff_eq;

    fn history(n: usize, dt: f64, f: impl Fn(f64) -> (f64, f64)) -> ForceHistory {
        let samples = (1..=n)
            .map(|k| {
                let t = k as f64 * dt;
                let (fx, fy) = f(t);
                ForceSample { t, fx, fy }
            })
            .collect();
        ForceHistory::new(dt, samples).unwrap()
    }

    fn tone(f: f64, dt: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|k| (2.0 * PI * f * k as f64 * dt).sin())
            .collect()
    }

    #[test]
    fn trimming() {
        let h = history(100, 0.1, |_| (1.0, 0.0));
        let t = trim_transient(&h, 0.5).unwrap();
        assert_eq!(t.len(), 50);
        assert_eq!(t.samples()[0], h.samples()[50]);
        assert_eq!(trim_transient(&h, 0.0).unwrap(), h);
        let short = history(10, 0.1, |_| (1.0, 0.0));
        assert!(matches!(
            trim_transient(&short, 0.5),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn non_uniform_history_is_rejected() {
        let samples = vec![
            ForceSample {
                t: 0.0,
                fx: 0.0,
                fy: 0.0,
            },
            ForceSample {
                t: 0.1,
                fx: 0.0,
                fy: 0.0,
            },
            ForceSample {
                t: 0.25,
                fx: 0.0,
                fy: 0.0,
            },
        ];
        assert!(matches!(
            ForceHistory::new(0.1, samples),
            Err(Error::Sampling(_))
        ));
    }

    #[test]
    fn frequency_of_synthetic_tones() {
        let f = dominant_frequency(&tone(5.0, 0.001, 4000), 0.001).unwrap();
        assert_abs_diff_eq!(f, 5.0, epsilon = 0.05);
        assert_eq!(dominant_frequency(&[3.0; 64], 0.01).unwrap(), 0.0);
        let mixed: Vec<f64> = (0..4000)
            .map(|k| {
                let t = k as f64 * 0.001;
                (2.0 * PI * 2.0 * t).sin() + 0.3 * (2.0 * PI * 7.0 * t).sin()
            })
            .collect();
        assert_abs_diff_eq!(
            dominant_frequency(&mixed, 0.001).unwrap(),
            2.0,
            epsilon = 0.05
        );
        assert!(matches!(
            dominant_frequency(&[1.0; 8], 0.1),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn zero_crossing_estimator() {
        let f = zero_crossing_frequency(&tone(3.3, 0.002, 5000), 0.002).unwrap();
        assert_abs_diff_eq!(f, 3.3, epsilon = 0.01);
        assert!(zero_crossing_frequency(&[1.0; 32], 0.1).is_err());
    }

    #[test]
    fn coefficient_definitions() {
        let (u, d, rho) = (2.0, 0.1, 1.2);
        let q = 0.5 * rho * u * u * d;
        let h = history(2000, 0.01, |t| (q, q * (2.0 * PI * 1.5 * t).sin()));
        assert_abs_diff_eq!(
            drag_coefficient(&h, u, d, rho).unwrap(),
            1.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            lift_coefficient(&h, u, d, rho).unwrap(),
            1.0,
            epsilon = 0.02
        );
        let zero = history(32, 0.1, |_| (0.0, 0.0));
        assert_eq!(drag_coefficient(&zero, u, d, rho).unwrap(), 0.0);
        let steady_lift = history(32, 0.1, |_| (1.0, 0.7));
        assert_abs_diff_eq!(
            lift_coefficient(&steady_lift, u, d, rho).unwrap(),
            0.0,
            epsilon = 1e-12
        );
        assert!(matches!(
            drag_coefficient(&h, 0.0, d, rho),
            Err(Error::Normalization(_))
        ));
        assert!(matches!(
            lift_coefficient(&h, u, 0.0, rho),
            Err(Error::Normalization(_))
        ));
    }

    #[test]
    fn drift_and_dimensionless_numbers() {
        assert_abs_diff_eq!(
            drift_coefficient(140.0, 198.3).unwrap(),
            0.71,
            epsilon = 0.005
        );
        assert_abs_diff_eq!(drift_coefficient(12.0, 4.0).unwrap(), 3.0, epsilon = 1e-15);
        assert_eq!(drift_coefficient(0.37, 0.37).unwrap(), 1.0);
        assert!(matches!(
            drift_coefficient(1.0, 0.0),
            Err(Error::DivisionDomain(_))
        ));
        assert!(matches!(
            drift_coefficient(1.0, -2.0),
            Err(Error::DivisionDomain(_))
        ));
        assert_abs_diff_eq!(strouhal(2.0, 0.10, 1.0), 0.20, epsilon = 1e-15);
        assert_eq!(strouhal(0.0, 0.1, 3.0), 0.0);
        assert_abs_diff_eq!(strouhal(28.0, 0.05, 5.0), 0.28, epsilon = 1e-15);
        assert_abs_diff_eq!(
            reynolds(1.0, 0.1, 1.5e-5),
            6666.666666666667,
            epsilon = 1e-9
        );
    }

    #[test]
    fn summary_matches_closed_forms() {
        let (u, d, nu, rho) = (1.5, 0.05, 1.5e-5, 1.0);
        let q = 0.5 * rho * u * u * d;
        let (c, a, f) = (1.3 * q, 0.4 * q, 6.0);
        let h = history(4000, 0.002, |t| (c, a * (2.0 * PI * f * t).sin()));
        let s = summarize(&h, "MD1", CaseScales { u, d, nu, rho }, 0.5).unwrap();
        assert_abs_diff_eq!(s.cd, 1.3, epsilon = 1e-12);
        assert_abs_diff_eq!(s.cl, 0.4, epsilon = 0.01);
        assert_abs_diff_eq!(s.frequency_hz, f, epsilon = 0.05);
        assert_abs_diff_eq!(s.strouhal, f * d / u, epsilon = 0.05 * d / u);
        assert_abs_diff_eq!(s.reynolds, u * d / nu, epsilon = 1e-9);
        assert_eq!(s.drift(), s.cl / s.cd);
        assert_eq!(
            s,
            summarize(&h, "MD1", CaseScales { u, d, nu, rho }, 0.5).unwrap()
        );
        let empty = ForceHistory::new(0.1, vec![]).unwrap();
        assert!(matches!(
            summarize(&empty, "MD1", CaseScales { u, d, nu, rho }, 0.5),
            Err(Error::InsufficientData(_))
        ));
    }
}
