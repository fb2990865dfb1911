//! CSV tables, SVG charts and PGM field images.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::solver::{FieldSnapshot, ForceHistory, ScalarField};

use super::sweep::{CaseArtifacts, SweepTable};

pub const CSV_HEADER: &str = "design,U_mps,frequency_hz,CL,CD,drift,strouhal,reynolds";

/// `x` with `digits` significant digits, trailing zeros dropped, switching
/// to exponent notation outside `1e-4 ≤ |x| < 10^digits` (C's `%g`).
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        format!(
            "{}e{}{:02}",
            trim_zeros(mantissa),
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        )
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}"))
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
    }
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Table text: one line per row, failed cases with empty coefficient fields.
pub fn table_csv(table: &SweepTable) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in &table.rows {
        let g = |x: f64| format_sig(x, 6);
        match &row.summary {
            Some(s) => {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    row.design,
                    g(row.u),
                    g(s.frequency_hz),
                    g(s.cl),
                    g(s.cd),
                    g(s.drift()),
                    g(s.strouhal),
                    g(s.reynolds)
                );
            }
            None => {
                let _ = writeln!(out, "{},{},,,,,,", row.design, g(row.u));
            }
        }
    }
    out
}

pub fn emit_csv(table: &SweepTable, path: &Path) -> Result<()> {
    write_file(path, table_csv(table).as_bytes())
}

/// Force history as `t,Fx,Fy` rows.
pub fn forces_csv(history: &ForceHistory) -> String {
    let mut out = String::from("t,Fx,Fy\n");
    for s in history.samples() {
        let _ = writeln!(out, "{},{},{}", s.t, s.fx, s.fy);
    }
    out
}

pub fn emit_forces(history: &ForceHistory, path: &Path) -> Result<()> {
    write_file(path, forces_csv(history).as_bytes())
}

const PALETTE: [&str; 6] = [
    "#1b6ca8", "#d1495b", "#2e933c", "#edae49", "#7b4b94", "#3d3d3d",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Padded range covering `lo..=hi`.
fn axis_range(lo: f64, hi: f64) -> (f64, f64) {
    if hi > lo {
        let pad = 0.05 * (hi - lo);
        (lo - pad, hi + pad)
    } else {
        let pad = if lo == 0.0 { 1.0 } else { 0.1 * lo.abs() };
        (lo - pad, hi + pad)
    }
}

struct Series<'a> {
    name: &'a str,
    points: Vec<(f64, f64)>,
}

/// Standalone SVG 1.1 line chart, one polyline per series.
fn line_chart(title: &str, x_label: &str, y_label: &str, series: &[Series<'_>]) -> String {
    const W: f64 = 640.0;
    const H: f64 = 420.0;
    const LEFT: f64 = 70.0;
    const RIGHT: f64 = 130.0;
    const TOP: f64 = 40.0;
    const BOTTOM: f64 = 55.0;
    let all = series.iter().flat_map(|s| s.points.iter());
    let (xmin, xmax, ymin, ymax) = all.fold(
        (
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
        ),
        |(a, b, c, d), &(x, y)| (a.min(x), b.max(x), c.min(y), d.max(y)),
    );
    let (x0, x1) = axis_range(xmin, xmax);
    let (y0, y1) = axis_range(ymin.min(0.0), ymax);
    let pw = W - LEFT - RIGHT;
    let ph = H - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| TOP + ph - (y - y0) / (y1 - y0) * ph;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#
    );
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="22" font-family="sans-serif" font-size="15" text-anchor="middle">{}</text>"#,
        LEFT + pw / 2.0,
        escape(title)
    );
    let _ = writeln!(
        svg,
        r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    for k in 0..=4 {
        let f = k as f64 / 4.0;
        let xv = x0 + f * (x1 - x0);
        let yv = y0 + f * (y1 - y0);
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="middle">{}</text>"#,
            sx(xv),
            TOP + ph + 16.0,
            format_sig(xv, 3)
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            sy(yv) + 4.0,
            format_sig(yv, 3)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="13" text-anchor="middle">{}</text>"#,
        LEFT + pw / 2.0,
        H - 14.0,
        escape(x_label)
    );
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{:.1}" font-family="sans-serif" font-size="13" text-anchor="middle" transform="rotate(-90 18 {:.1})">{}</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0,
        escape(y_label)
    );
    for (k, s) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let points: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            points.join(" ")
        );
        for &(x, y) in &s.points {
            let _ = writeln!(
                svg,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#,
                sx(x),
                sy(y)
            );
        }
        let ly = TOP + 10.0 + 20.0 * k as f64;
        let lx = W - RIGHT + 15.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#,
            lx + 20.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12">{}</text>"#,
            lx + 26.0,
            ly + 4.0,
            escape(s.name)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn series_of(
    table: &SweepTable,
    value: impl Fn(&crate::analysis::CoefficientSummary) -> f64,
) -> Vec<Series<'_>> {
    table
        .designs()
        .into_iter()
        .map(|name| Series {
            name,
            points: table
                .rows
                .iter()
                .filter(|r| r.design == name)
                .filter_map(|r| r.summary.as_ref().map(|s| (r.u, value(s))))
                .collect(),
        })
        .filter(|s| !s.points.is_empty())
        .collect()
}

/// Writes `frequency_vs_speed.svg` and `drift_vs_speed.svg` into `dir`.
pub fn emit_plots(table: &SweepTable, dir: &Path) -> Result<Vec<PathBuf>> {
    if table.summaries().next().is_none() {
        return Err(Error::InsufficientData("no successful rows to plot".into()));
    }
    let charts = [
        (
            "frequency_vs_speed.svg",
            line_chart(
                "Shedding frequency",
                "wind speed U (m/s)",
                "frequency (Hz)",
                &series_of(table, |s| s.frequency_hz),
            ),
        ),
        (
            "drift_vs_speed.svg",
            line_chart(
                "Drift coefficient CL/CD",
                "wind speed U (m/s)",
                "drift coefficient (dimensionless)",
                &series_of(table, |s| s.drift()),
            ),
        ),
    ];
    let mut paths = Vec::new();
    for (name, svg) in charts {
        let path = dir.join(name);
        write_file(&path, svg.as_bytes())?;
        paths.push(path);
    }
    Ok(paths)
}

/// Binary 16-bit PGM of `field`, top row first, linearly mapping
/// `[lo, hi]` onto `0..=65535`.
pub fn pgm16(field: &ScalarField, lo: f64, hi: f64) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n65535\n", field.nx, field.ny).into_bytes();
    let span = if hi > lo { hi - lo } else { 1.0 };
    for j in (0..field.ny).rev() {
        for i in 0..field.nx {
            let t = ((field.at(i, j) - lo) / span).clamp(0.0, 1.0);
            let level = (t * 65535.0).round() as u16;
            out.extend_from_slice(&level.to_be_bytes());
        }
    }
    out
}

/// File stem `{design}_{U}mps_t{time}`.
pub fn snapshot_stem(design: &str, u: f64, time: f64) -> String {
    format!("{design}_{}mps_t{}", format_sig(u, 6), format_sig(time, 6))
}

/// Cell-centered fields as `x,y,u,v,p,omega`, one row per cell, row-major
/// from the bottom row.
pub fn fields_csv(snapshot: &FieldSnapshot) -> String {
    let (nx, ny) = (snapshot.grid.nx, snapshot.grid.ny);
    let mut out = String::with_capacity(64 * nx * ny);
    out.push_str("x,y,u,v,p,omega\n");
    for j in 0..ny {
        for i in 0..nx {
            let c = snapshot.cell_center(i, j);
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                c.x,
                c.y,
                snapshot.u.at(i, j),
                snapshot.v.at(i, j),
                snapshot.p.at(i, j),
                snapshot.omega.at(i, j)
            );
        }
    }
    out
}

/// Vorticity image of one snapshot, scaled symmetrically about zero, with a
/// `.txt` sidecar giving the scale and a `.csv` of the raw fields.
pub fn emit_snapshot(
    design: &str,
    u: f64,
    snapshot: &FieldSnapshot,
    dir: &Path,
) -> Result<Vec<PathBuf>> {
    let (lo, hi) = snapshot.omega.min_max();
    let bound = lo.abs().max(hi.abs());
    let stem = snapshot_stem(design, u, snapshot.time);
    let image = dir.join(format!("{stem}.pgm"));
    write_file(&image, &pgm16(&snapshot.omega, -bound, bound))?;
    let sidecar = dir.join(format!("{stem}.txt"));
    let text = format!(
        "field vorticity\nunits 1/s\nblack {}\nwhite {}\nmin {}\nmax {}\n",
        -bound, bound, lo, hi
    );
    write_file(&sidecar, text.as_bytes())?;
    let fields = dir.join(format!("{stem}.csv"));
    write_file(&fields, fields_csv(snapshot).as_bytes())?;
    Ok(vec![image, sidecar, fields])
}

/// Writes every snapshot of every case.
pub fn emit_snapshots(cases: &[CaseArtifacts], dir: &Path) -> Result<Vec<PathBuf>> {
    let mut paths = Vec::new();
    for case in cases {
        for snapshot in &case.snapshots {
            paths.extend(emit_snapshot(&case.design, case.u, snapshot, dir)?);
        }
    }
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(1.0, 6), "1");
        assert_eq!(format_sig(2.3, 6), "2.3");
        assert_eq!(format_sig(0.7059759, 6), "0.705976");
        assert_eq!(format_sig(6666.666666, 6), "6666.67");
        assert_eq!(format_sig(33333.33333, 6), "33333.3");
        assert_eq!(format_sig(1234567.0, 6), "1.23457e+06");
        assert_eq!(format_sig(0.0000123456789, 6), "1.23457e-05");
        assert_eq!(format_sig(-0.5, 6), "-0.5");
        assert_eq!(format_sig(999999.7, 6), "1e+06");
        assert_eq!(format_sig(0.0, 6), "0");
    }

    #[test]
    fn pgm_layout() {
        let field = ScalarField {
            nx: 2,
            ny: 2,
            values: vec![-1.0, 0.0, 0.5, 1.0],
        };
        let bytes = pgm16(&field, -1.0, 1.0);
        let header = b"P5\n2 2\n65535\n";
        assert_eq!(&bytes[..header.len()], header);
        let px: Vec<u16> = bytes[header.len()..]
            .chunks(2)
            .map(|c| u16::from_be_bytes([c[0], c[1]]))
            .collect();
        // top row (j = 1) first
        assert_eq!(px, vec![49151, 65535, 0, 32768]);
    }
}
