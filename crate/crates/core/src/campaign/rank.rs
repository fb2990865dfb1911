use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::sweep::SweepTable;

/// A design's standing at the target speed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedDesign {
    pub design: String,
    pub drift: f64,
    pub frequency_hz: f64,
}

/// Piecewise-linear interpolation through `(x, y)` points sorted by `x`.
/// Returns the point's own value when `x` hits a node.
fn interpolate(points: &[(f64, f64)], x: f64) -> Option<f64> {
    if let Some(&(_, y)) = points.iter().find(|p| p.0 == x) {
        return Some(y);
    }
    points
        .windows(2)
        .find(|w| w[0].0 < x && x < w[1].0)
        .map(|w| {
            let (x0, y0) = w[0];
            let (x1, y1) = w[1];
            y0 + (y1 - y0) * (x - x0) / (x1 - x0)
        })
}

/// Designs ordered by drift coefficient interpolated to `target_speed`,
/// highest first. Ties go to the higher interpolated frequency, then to the
/// lexicographically smaller name. Failed cases are skipped.
pub fn rank_designs(table: &SweepTable, target_speed: f64) -> Result<Vec<RankedDesign>> {
    let mut ranked = Vec::new();
    for name in table.designs() {
        let rows: Vec<_> = table
            .rows
            .iter()
            .filter(|r| r.design == name)
            .filter_map(|r| r.summary.as_ref().map(|s| (r.u, s)))
            .collect();
        if rows.is_empty() {
            continue;
        }
        let drift: Vec<(f64, f64)> = rows.iter().map(|(u, s)| (*u, s.drift())).collect();
        let freq: Vec<(f64, f64)> = rows.iter().map(|(u, s)| (*u, s.frequency_hz)).collect();
        let out_of_range = || {
            Error::Extrapolation(format!(
                "target {target_speed} m/s outside {name}'s speed range [{}, {}] m/s",
                drift[0].0,
                drift[drift.len() - 1].0
            ))
        };
        ranked.push(RankedDesign {
            design: name.to_string(),
            drift: interpolate(&drift, target_speed).ok_or_else(out_of_range)?,
            frequency_hz: interpolate(&freq, target_speed).ok_or_else(out_of_range)?,
        });
    }
    if ranked.is_empty() {
        return Err(Error::InsufficientData(
            "no successful cases to rank".into(),
        ));
    }
    ranked.sort_by(|a, b| {
        b.drift
            .total_cmp(&a.drift)
            .then(b.frequency_hz.total_cmp(&a.frequency_hz))
            .then(a.design.cmp(&b.design))
    });
    Ok(ranked)
}
