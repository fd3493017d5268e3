//! Minimal scatter plots of boundary samples.

use std::fmt::Write;

use chgeom::HeisPoint;

const PANEL: f64 = 360.0;
const PAD: f64 = 40.0;
const COLORS: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"];

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<HeisPoint>,
}

fn bounds(pts: impl Iterator<Item = (f64, f64)>) -> (f64, f64, f64, f64) {
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for (x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        return (-1.0, 1.0, -1.0, 1.0);
    }
    let grow = |a: f64, b: f64| if b - a < 1e-12 { (a - 1.0, b + 1.0) } else { (a, b) };
    let (x0, x1) = grow(x0, x1);
    let (y0, y1) = grow(y0, y1);
    (x0, x1, y0, y1)
}

fn panel(out: &mut String, offset: f64, title: &str, series: &[Series], coords: impl Fn(&HeisPoint) -> (f64, f64)) {
    let (x0, x1, y0, y1) = bounds(series.iter().flat_map(|s| s.points.iter().map(&coords)));
    let sx = |x: f64| offset + PAD + (x - x0) / (x1 - x0) * PANEL;
    let sy = |y: f64| PAD + (y1 - y) / (y1 - y0) * PANEL;
    let _ = writeln!(
        out,
        r##"<rect x="{:.1}" y="{PAD}" width="{PANEL}" height="{PANEL}" fill="none" stroke="#888"/>"##,
        offset + PAD
    );
    let _ = writeln!(out, r#"<text x="{:.1}" y="{:.1}" font-size="13">{title}</text>"#, offset + PAD, PAD - 10.0);
    for (k, s) in series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        for p in &s.points {
            let (x, y) = coords(p);
            let _ = writeln!(out, r#"<circle cx="{:.2}" cy="{:.2}" r="1.2" fill="{color}"/>"#, sx(x), sy(y));
        }
    }
}

/// Two panels: the `ξ₁`-plane and the `(|ξ|², v)`-plane.
pub fn scatter(series: &[Series]) -> String {
    let width = 2.0 * (PANEL + 2.0 * PAD);
    let height = PANEL + 2.0 * PAD + 20.0 * series.len() as f64;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    panel(&mut out, 0.0, "Re xi vs Im xi", series, |p| (p.xi[0].re, p.xi[0].im));
    panel(&mut out, PANEL + 2.0 * PAD, "|xi|^2 vs v", series, |p| (p.xi.norm_squared(), p.v));
    for (k, s) in series.iter().enumerate() {
        let y = PANEL + 2.0 * PAD + 14.0 + 20.0 * k as f64;
        let color = COLORS[k % COLORS.len()];
        let _ = writeln!(out, r#"<circle cx="{PAD}" cy="{:.1}" r="4" fill="{color}"/>"#, y - 4.0);
        let _ = writeln!(out, r#"<text x="{:.1}" y="{y:.1}" font-size="12">{}</text>"#, PAD + 10.0, s.label);
    }
    out.push_str("</svg>\n");
    out
}
