//! `report.csv` and `decay.svg`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::config::Method;
use super::rates::median_curves;
use super::sweep::{compute_fits, Row, RunReport};
use crate::{Error, Result};

pub const REPORT_HEADER: &str = "method,p,seed,rmse_train,rmse_test,max_err_test,mmd2,wall_time_ms";

fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v}")
    } else {
        String::new()
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

/// CSV text of the report rows. Numbers use the shortest round-trip form;
/// failed runs and missing values leave empty fields.
pub fn report_csv(report: &RunReport) -> String {
    let mut out = String::with_capacity(64 * (report.rows.len() + 1));
    out.push_str(REPORT_HEADER);
    out.push('\n');
    for r in &report.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.method,
            r.p,
            r.seed,
            num(r.rmse_train),
            num(r.rmse_test),
            num(r.max_err_test),
            opt(r.mmd2),
            opt(r.wall_time_ms)
        );
    }
    out
}

/// Parses a `report.csv`; fits are recomputed over `p ≥ fit_min_p`.
pub fn read_report_csv(path: impl AsRef<Path>, fit_min_p: usize) -> Result<RunReport> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let ctx = |msg: String| Error::Parse(format!("{}: {msg}", path.display()));
    let mut reader = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| ctx(e.to_string()))?;
    if header.iter().collect::<Vec<_>>().join(",") != REPORT_HEADER {
        return Err(ctx(format!("unexpected header, expected `{REPORT_HEADER}`")));
    }
    let mut rows = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| ctx(e.to_string()))?;
        let line = i + 2;
        let field = |k: usize| rec.get(k).unwrap_or("").trim();
        let float = |k: usize| -> Result<Option<f64>> {
            let s = field(k);
            if s.is_empty() {
                Ok(None)
            } else {
                s.parse::<f64>()
                    .map(Some)
                    .map_err(|e| ctx(format!("line {line}, column {}: {e}", k + 1)))
            }
        };
        let int = |k: usize| -> Result<usize> {
            field(k)
                .parse::<usize>()
                .map_err(|e| ctx(format!("line {line}, column {}: {e}", k + 1)))
        };
        let method: Method = field(0).parse()?;
        let metrics = (float(3)?, float(4)?, float(5)?);
        let error = match metrics {
            (Some(_), Some(_), Some(_)) => None,
            _ => Some("run failed".to_string()),
        };
        rows.push(Row {
            method,
            p: int(1)?,
            seed: int(2)?,
            rmse_train: metrics.0.unwrap_or(f64::NAN),
            rmse_test: metrics.1.unwrap_or(f64::NAN),
            max_err_test: metrics.2.unwrap_or(f64::NAN),
            mmd2: float(6)?,
            wall_time_ms: float(7)?,
            error,
        });
    }
    let fits = compute_fits(&rows, fit_min_p);
    Ok(RunReport { rows, fits })
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 50.0;

fn color(m: Method) -> &'static str {
    match m {
        Method::Sir => "#d62728",
        Method::Ukq => "#1f77b4",
        Method::GkqGrid => "#2ca02c",
    }
}

/// Log–log plot of the median `max_err_test` per method with reference
/// slopes −½ and −1 through the first plotted point.
pub fn render_svg(report: &RunReport) -> String {
    let curves = median_curves(&report.rows, |r| r.max_err_test);
    let pts: Vec<(f64, f64)> = curves
        .values()
        .flatten()
        .filter(|(_, e)| *e > 0.0)
        .map(|&(p, e)| ((p as f64).log10(), e.log10()))
        .collect();
    let (mut x0, mut x1, mut y0, mut y1) = if pts.is_empty() {
        (0.0, 2.0, -3.0, 0.0)
    } else {
        pts.iter().fold(
            (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY),
            |(a, b, c, d), &(x, y)| (a.min(x), b.max(x), c.min(y), d.max(y)),
        )
    };
    x0 = x0.floor();
    x1 = x1.ceil().max(x0 + 1.0);
    y0 = y0.floor();
    y1 = y1.ceil().max(y0 + 1.0);
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * (WIDTH - LEFT - RIGHT);
    let sy = |y: f64| TOP + (y1 - y) / (y1 - y0) * (HEIGHT - TOP - BOTTOM);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(s, r##"<clipPath id="plot"><rect x="{LEFT}" y="{TOP}" width="{:.2}" height="{:.2}"/></clipPath>"##,
        WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM);
    // axes and decade ticks
    let _ = writeln!(
        s,
        r#"<path d="M{:.2},{:.2} V{:.2} H{:.2}" stroke="black" fill="none"/>"#,
        LEFT,
        TOP,
        HEIGHT - BOTTOM,
        WIDTH - RIGHT
    );
    for k in (x0 as i32)..=(x1 as i32) {
        let x = sx(k as f64);
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">1e{k}</text>"#,
            HEIGHT - BOTTOM,
            HEIGHT - BOTTOM + 5.0,
            HEIGHT - BOTTOM + 20.0
        );
    }
    for k in (y0 as i32)..=(y1 as i32) {
        let y = sy(k as f64);
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{LEFT:.2}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">1e{k}</text>"#,
            LEFT - 5.0,
            LEFT - 8.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">p</text>"#,
        (LEFT + WIDTH - RIGHT) / 2.0,
        HEIGHT - 10.0
    );
    let _ = writeln!(
        s,
        r#"<text x="15" y="{:.2}" text-anchor="middle" transform="rotate(-90 15 {:.2})">median max error (test)</text>"#,
        (TOP + HEIGHT - BOTTOM) / 2.0,
        (TOP + HEIGHT - BOTTOM) / 2.0
    );

    // reference slopes through the first plotted point
    let anchor = curves
        .values()
        .flatten()
        .find(|(_, e)| *e > 0.0)
        .map(|&(p, e)| ((p as f64).log10(), e.log10()))
        .unwrap_or((x0, y1));
    for (slope, dash, label) in [(-0.5, "6,4", "O(p^-1/2)"), (-1.0, "2,3", "O(p^-1)")] {
        let ya = anchor.1 + slope * (x0 - anchor.0);
        let yb = anchor.1 + slope * (x1 - anchor.0);
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="gray" stroke-dasharray="{dash}" clip-path="url(#plot)"/>"#,
            sx(x0),
            sy(ya),
            sx(x1),
            sy(yb)
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" fill="gray">{label}</text>"#,
            WIDTH - RIGHT + 10.0,
            if slope == -0.5 { TOP + 60.0 } else { TOP + 80.0 }
        );
    }

    for (i, (method, curve)) in curves.iter().enumerate() {
        let points: Vec<String> = curve
            .iter()
            .filter(|(_, e)| *e > 0.0)
            .map(|&(p, e)| format!("{:.2},{:.2}", sx((p as f64).log10()), sy(e.log10())))
            .collect();
        let c = color(*method);
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{c}" stroke-width="2"/>"#,
            points.join(" ")
        );
        for pt in &points {
            let (x, y) = pt.split_once(',').expect("formatted pair");
            let _ = writeln!(s, r#"<circle cx="{x}" cy="{y}" r="3" fill="{c}"/>"#);
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" fill="{c}">{method}</text>"#,
            WIDTH - RIGHT + 10.0,
            TOP + 100.0 + 18.0 * i as f64
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Writes `report.csv` and `decay.svg` into `out_dir` (created if missing).
pub fn emit(report: &RunReport, out_dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let dir = out_dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let csv_path = dir.join("report.csv");
    std::fs::write(&csv_path, report_csv(report)).map_err(|e| Error::io(&csv_path, e))?;
    let svg_path = dir.join("decay.svg");
    std::fs::write(&svg_path, render_svg(report)).map_err(|e| Error::io(&svg_path, e))?;
    Ok(vec![csv_path, svg_path])
}
