//! Results reported for the three mast sections, used as regression data.
//!
//! Lift and drag are unnormalized solver outputs of unknown scaling, so only
//! their ratio and the orderings are comparable with this crate's
//! coefficients.

use crate::analysis::{reynolds, strouhal, CoefficientSummary};
use crate::campaign::{CaseRow, Provenance, SweepTable};
use crate::geometry::{design, DesignTag};
use crate::solver::AIR_KINEMATIC_VISCOSITY;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportedRow {
    pub design: DesignTag,
    /// m/s
    pub speed: f64,
    pub frequency_hz: f64,
    pub cl: f64,
    pub cd: f64,
    /// Printed `CL/CD`, two decimals.
    pub drift: f64,
}

const fn row(
    design: DesignTag,
    speed: f64,
    frequency_hz: f64,
    cl: f64,
    cd: f64,
    drift: f64,
) -> ReportedRow {
    ReportedRow {
        design,
        speed,
        frequency_hz,
        cl,
        cd,
        drift,
    }
}

use DesignTag::{Id, Md1, Md2};

pub const REPORTED: [ReportedRow; 15] = [
    row(Id, 1.0, 2.00, 140.00, 198.30, 0.71),
    row(Id, 2.0, 5.00, 124.16, 149.16, 0.83),
    row(Id, 3.0, 7.50, 123.75, 128.75, 0.96),
    row(Id, 4.0, 10.00, 99.00, 117.70, 0.84),
    row(Id, 5.0, 9.30, 95.70, 78.50, 1.22),
    row(Md1, 1.0, 5.00, 18.00, 19.20, 0.94),
    row(Md1, 2.0, 9.00, 18.50, 16.00, 1.16),
    row(Md1, 3.0, 13.50, 15.04, 16.00, 0.94),
    row(Md1, 4.0, 17.50, 15.59, 16.90, 0.92),
    row(Md1, 5.0, 17.00, 10.77, 11.68, 0.92),
    row(Md2, 1.0, 6.75, 6.00, 4.00, 1.50),
    row(Md2, 2.0, 14.00, 7.50, 4.00, 1.88),
    row(Md2, 3.0, 20.00, 10.00, 4.00, 2.50),
    row(Md2, 4.0, 25.00, 11.20, 4.00, 2.80),
    row(Md2, 5.0, 28.00, 12.00, 4.00, 3.00),
];

/// The reported results as a sweep table (viscosity of air, transient
/// fraction 0).
pub fn reported_table() -> SweepTable {
    let rows = REPORTED
        .iter()
        .map(|r| {
            let d = design(r.design).frontal_width();
            CaseRow {
                design: r.design.to_string(),
                u: r.speed,
                summary: Some(CoefficientSummary {
                    design: r.design.to_string(),
                    u: r.speed,
                    frequency_hz: r.frequency_hz,
                    cl: r.cl,
                    cd: r.cd,
                    strouhal: strouhal(r.frequency_hz, d, r.speed),
                    reynolds: reynolds(r.speed, d, AIR_KINEMATIC_VISCOSITY),
                    transient_fraction: 0.0,
                }),
                error: None,
                numerical_failure: false,
                steps: 0,
                wall_seconds: 0.0,
            }
        })
        .collect();
    SweepTable::new(rows, Provenance::default()).expect("reported rows have unique keys")
}
