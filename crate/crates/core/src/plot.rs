//! Minimal SVG scatter plots for state-space projections and ROC curves.

use std::fmt::Write;

use crate::classifier::RocReport;

const SIZE: f64 = 480.0;
const MARGIN: f64 = 48.0;
const PALETTE: [&str; 7] = ["#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#666666"];

pub struct Series<'a> {
    pub name: &'a str,
    pub points: Vec<(f64, f64)>,
    /// Connect consecutive points with a polyline.
    pub line: bool,
}

fn bounds(series: &[Series<'_>]) -> (f64, f64, f64, f64) {
    let pts = series.iter().flat_map(|s| s.points.iter());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in pts.filter(|(x, y)| x.is_finite() && y.is_finite()) {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        return (0.0, 1.0, 0.0, 1.0);
    }
    let pad = |lo: f64, hi: f64| if hi > lo { (lo, hi) } else { (lo - 0.5, hi + 0.5) };
    let (x0, x1) = pad(x0, x1);
    let (y0, y1) = pad(y0, y1);
    (x0, x1, y0, y1)
}

/// Renders a labeled scatter (or line) plot with a legend.
pub fn scatter_svg(title: &str, series: &[Series<'_>], fixed: Option<(f64, f64, f64, f64)>) -> String {
    let (x0, x1, y0, y1) = fixed.unwrap_or_else(|| bounds(series));
    let span = SIZE - 2.0 * MARGIN;
    let px = |x: f64| MARGIN + (x - x0) / (x1 - x0) * span;
    let py = |y: f64| SIZE - MARGIN - (y - y0) / (y1 - y0) * span;

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#);
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="14">{}</text>"#, SIZE / 2.0, escape(title));
    let _ = writeln!(
        s,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{span}" height="{span}" fill="none" stroke="black" stroke-width="1"/>"#
    );
    for (k, ser) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let pts: Vec<(f64, f64)> =
            ser.points.iter().filter(|(x, y)| x.is_finite() && y.is_finite()).map(|&(x, y)| (px(x), py(y))).collect();
        if ser.line {
            let path: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
            let _ = writeln!(s, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#, path.join(" "));
        } else {
            for (x, y) in &pts {
                let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="{color}" fill-opacity="0.7"/>"#);
            }
        }
        let ly = MARGIN + 14.0 + 14.0 * k as f64;
        let lx = SIZE - MARGIN - 90.0;
        let _ = writeln!(s, r#"<rect x="{lx}" y="{}" width="8" height="8" fill="{color}"/>"#, ly - 8.0);
        let _ = writeln!(s, r#"<text x="{}" y="{ly}" font-family="sans-serif" font-size="11">{}</text>"#, lx + 12.0, escape(ser.name));
    }
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// One line per mechanism on the unit square.
pub fn roc_svg(report: &RocReport) -> String {
    let names: Vec<String> = report.curves.iter().map(|c| format!("{} AUC={:.3}", c.mechanism, c.auc)).collect();
    let series: Vec<Series<'_>> = report
        .curves
        .iter()
        .zip(&names)
        .map(|(c, name)| Series { name, points: c.points.iter().map(|p| (p.fpr, p.tpr)).collect(), line: true })
        .collect();
    scatter_svg("ROC", &series, Some((0.0, 1.0, 0.0, 1.0)))
}

/// 2-D projection coloured by group label (unlabeled points grouped as "query").
pub fn state_space_svg(coords: &[Vec<f64>], groups: &[String]) -> String {
    let mut names: Vec<&str> = groups.iter().map(String::as_str).collect();
    names.sort_unstable();
    names.dedup();
    let series: Vec<Series<'_>> = names
        .iter()
        .map(|&name| Series {
            name,
            points: coords
                .iter()
                .zip(groups)
                .filter(|(_, g)| g.as_str() == name)
                .map(|(c, _)| (c.first().copied().unwrap_or(0.0), c.get(1).copied().unwrap_or(0.0)))
                .collect(),
            line: false,
        })
        .collect();
    scatter_svg("State space (MDS)", &series, None)
}
