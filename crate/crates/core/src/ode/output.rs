use std::fmt::Write as _;
use std::io;
use std::path::Path;

use super::{Real, Trajectory};

/// One CSV line per row, 17 significant digits.
pub fn to_csv<F: Real>(traj: &Trajectory<F>) -> String {
    let mut out = traj.names.join(",");
    out.push('\n');
    for (x, y) in traj.rows() {
        let _ = write!(out, "{}", sci(*x));
        for v in y {
            let _ = write!(out, ",{}", sci(*v));
        }
        out.push('\n');
    }
    out
}

fn sci<F: Real>(v: F) -> String {
    format!("{:.16e}", v.to_f64().unwrap_or(f64::NAN))
}

pub fn write_csv<F: Real>(traj: &Trajectory<F>, path: &Path) -> io::Result<()> {
    std::fs::write(path, to_csv(traj))
}

/// Reads back a file written by [`write_csv`]: header names and rows.
pub fn read_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>), String> {
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .ok_or("empty file")?
        .split(',')
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let row: Vec<f64> = line
            .split(',')
            .map(|v| v.parse::<f64>().map_err(|e| format!("line {}: {e}", i + 2)))
            .collect::<Result<_, _>>()?;
        if row.len() != header.len() {
            return Err(format!("line {}: expected {} fields", i + 2, header.len()));
        }
        rows.push(row);
    }
    Ok((header, rows))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveStyle {
    pub color: String,
    pub label: String,
}

impl CurveStyle {
    pub fn new(color: &str, label: &str) -> Self {
        CurveStyle {
            color: color.to_string(),
            label: label.to_string(),
        }
    }
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 70.0;

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if lo > hi {
        (0.0, 1.0)
    } else if lo == hi {
        (lo - 1.0, hi + 1.0)
    } else {
        (lo, hi)
    }
}

fn label(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

/// Plots the first state component of each trajectory against the
/// independent variable.
pub fn to_svg<F: Real>(trajs: &[Trajectory<F>], styles: &[CurveStyle], title: &str) -> String {
    let rows = |t: &Trajectory<F>| -> Vec<(f64, f64)> {
        t.rows()
            .iter()
            .filter_map(|(x, y)| Some((x.to_f64()?, y.first()?.to_f64()?)))
            .collect()
    };
    let curves: Vec<Vec<(f64, f64)>> = trajs.iter().map(rows).collect();
    let (x0, x1) = bounds(curves.iter().flatten().map(|p| p.0));
    let (y0, y1) = bounds(curves.iter().flatten().map(|p| p.1));
    let px = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let py = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);
    let xname = trajs.first().map_or("x", |t| t.names[0].as_str());
    let yname = trajs.first().and_then(|t| t.names.get(1)).map_or("y", |s| s.as_str());

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="30" text-anchor="middle" font-size="18">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    let (left, right, top, bottom) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(s, r#"<g stroke="black" stroke-width="1">"#);
    let _ = writeln!(s, r#"<line x1="{left}" y1="{bottom}" x2="{right}" y2="{bottom}"/>"#);
    let _ = writeln!(s, r#"<line x1="{left}" y1="{bottom}" x2="{left}" y2="{top}"/>"#);
    for x in [left, right] {
        let _ = writeln!(s, r#"<line x1="{x}" y1="{bottom}" x2="{x}" y2="{}"/>"#, bottom + 6.0);
    }
    for y in [top, bottom] {
        let _ = writeln!(s, r#"<line x1="{}" y1="{y}" x2="{left}" y2="{y}"/>"#, left - 6.0);
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g font-size="14">"#);
    let _ = writeln!(
        s,
        r#"<text x="{left}" y="{}" text-anchor="middle">{}</text>"#,
        bottom + 22.0,
        label(x0)
    );
    let _ = writeln!(
        s,
        r#"<text x="{right}" y="{}" text-anchor="middle">{}</text>"#,
        bottom + 22.0,
        label(x1)
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
        left - 10.0,
        bottom + 5.0,
        label(y0)
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
        left - 10.0,
        top + 5.0,
        label(y1)
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        bottom + 45.0,
        escape(xname)
    );
    let _ = writeln!(
        s,
        r#"<text x="20" y="{}" text-anchor="middle">{}</text>"#,
        HEIGHT / 2.0,
        escape(yname)
    );
    let _ = writeln!(s, "</g>");
    for (i, pts) in curves.iter().enumerate() {
        let style = styles.get(i).cloned().unwrap_or_else(|| CurveStyle::new("black", ""));
        let points: Vec<String> = pts
            .iter()
            .map(|(x, y)| format!("{:.2},{:.2}", px(*x), py(*y)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{}" stroke-width="2" points="{}"/>"#,
            escape(&style.color),
            points.join(" ")
        );
        if !style.label.is_empty() {
            let ly = top + 20.0 * (i as f64 + 1.0);
            let _ = writeln!(
                s,
                r#"<line x1="{}" y1="{ly}" x2="{}" y2="{ly}" stroke="{}" stroke-width="2"/><text x="{}" y="{}" font-size="14">{}</text>"#,
                right - 150.0,
                right - 120.0,
                escape(&style.color),
                right - 112.0,
                ly + 5.0,
                escape(&style.label)
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

pub fn write_svg<F: Real>(trajs: &[Trajectory<F>], styles: &[CurveStyle], title: &str, path: &Path) -> io::Result<()> {
    std::fs::write(path, to_svg(trajs, styles, title))
}
