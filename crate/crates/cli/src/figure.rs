//! Standalone SVG plot of the bound curves.
//!
//! Curves are drawn inside a group whose transform maps data coordinates to
//! the page, so every polyline's `points` attribute holds `(p, bound)` pairs
//! exactly as they appear in the CSV. Dashed blue is the previous best
//! bound in each regime (Rankin for `p ≤ 2`, `−1/p` for `p ≥ 2`); solid red
//! is the improved one (the transferred Euclidean bound for `p ≤ 2`, the
//! θ-optimized bound for `p ≥ 2`).

use std::fmt::Write as _;

use crate::curve::{BoundCurve, CurveRow};
use crate::format::fmt_num;

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 230.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;

const BLUE: &str = "#1f77b4";
const RED: &str = "#d62728";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Style {
    Dashed,
    Solid,
}

impl Style {
    pub fn class(self) -> &'static str {
        match self {
            Style::Dashed => "dashed",
            Style::Solid => "solid",
        }
    }
}

/// One polyline of the figure, in data coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: &'static str,
    pub style: Style,
    pub points: Vec<(f64, f64)>,
}

fn collect(
    curve: &BoundCurve,
    name: &'static str,
    style: Style,
    pick: impl Fn(&CurveRow) -> Option<f64>,
) -> Series {
    let points = curve
        .samples
        .iter()
        .filter_map(|r| pick(r).map(|y| (r.p, y)))
        .collect();
    Series { name, style, points }
}

/// The four curves, dropping any with fewer than two points.
pub fn series(curve: &BoundCurve) -> Vec<Series> {
    [
        collect(curve, "rankin", Style::Dashed, |r| r.rankin),
        collect(curve, "kl_transfer", Style::Solid, |r| r.kl_transfer),
        collect(curve, "vdcs", Style::Dashed, |r| r.vdcs),
        collect(curve, "new", Style::Solid, |r| r.new_bound),
    ]
    .into_iter()
    .filter(|s| s.points.len() >= 2)
    .collect()
}

/// A step of 1, 2 or 5 times a power of ten giving about `target` ticks.
fn nice_step(span: f64, target: f64) -> f64 {
    let raw = span / target;
    let mag = 10f64.powf(raw.log10().floor());
    let unit = raw / mag;
    let nice = if unit <= 1.0 {
        1.0
    } else if unit <= 2.0 {
        2.0
    } else if unit <= 5.0 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let step = nice_step(hi - lo, 6.0);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

pub fn render(curve: &BoundCurve) -> String {
    let all = series(curve);
    let [xmin, xmax] = curve.p_range;
    let (mut ymin, mut ymax) = all
        .iter()
        .flat_map(|s| s.points.iter().map(|&(_, y)| y))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), y| (a.min(y), b.max(y)));
    if !ymin.is_finite() {
        (ymin, ymax) = (-1.0, 0.0);
    }
    let pad = ((ymax - ymin) * 0.05).max(1e-6);
    let (ymin, ymax) = (ymin - pad, ymax + pad);

    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = plot_w / (xmax - xmin);
    let sy = plot_h / (ymax - ymin);
    let px = |x: f64| LEFT + (x - xmin) * sx;
    let py = |y: f64| TOP + (ymax - y) * sy;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);

    // Axes box, ticks and grid.
    let _ = writeln!(
        svg,
        r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );
    for t in ticks(xmin, xmax) {
        let x = px(t);
        let _ = writeln!(
            svg,
            r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"##,
            TOP + plot_h,
            TOP + plot_h + 5.0,
            TOP + plot_h + 20.0,
            fmt_num(t)
        );
    }
    for t in ticks(ymin, ymax) {
        let y = py(t);
        let _ = writeln!(
            svg,
            r##"<line x1="{:.2}" y1="{y:.2}" x2="{LEFT}" y2="{y:.2}" stroke="black"/><line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#dddddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"##,
            LEFT - 5.0,
            LEFT + plot_w,
            LEFT - 8.0,
            y + 4.0,
            fmt_num(t)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">p</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">upper bound on γ_p (bits per dimension)</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    );

    // Curves in data coordinates.
    let _ = writeln!(
        svg,
        r#"<g id="curves" transform="matrix({} 0 0 {} {} {})">"#,
        fmt_num(sx),
        fmt_num(-sy),
        fmt_num(LEFT - xmin * sx),
        fmt_num(TOP + ymax * sy)
    );
    for s in &all {
        let (color, dash) = match s.style {
            Style::Dashed => (BLUE, r#" stroke-dasharray="6 4""#),
            Style::Solid => (RED, ""),
        };
        let pts: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y)| format!("{},{}", fmt_num(x), fmt_num(y)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline class="{}" data-series="{}" fill="none" stroke="{color}" stroke-width="2" vector-effect="non-scaling-stroke"{dash} points="{}"/>"#,
            s.style.class(),
            s.name,
            pts.join(" ")
        );
    }
    let _ = writeln!(svg, "</g>");

    // Legend.
    let lx = WIDTH - RIGHT + 15.0;
    let entries = [
        (Style::Dashed, "previous bound", "Rankin (p < 2), -1/p (p > 2)"),
        (Style::Solid, "new bound", "KL transfer (p < 2), optimized θ (p > 2)"),
    ];
    for (i, (style, title, detail)) in entries.iter().enumerate() {
        let y = TOP + 20.0 + 44.0 * i as f64;
        let (color, dash) = match style {
            Style::Dashed => (BLUE, r#" stroke-dasharray="6 4""#),
            Style::Solid => (RED, ""),
        };
        let _ = writeln!(
            svg,
            r#"<g class="legend"><line x1="{lx:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{color}" stroke-width="2"{dash}/><text x="{:.2}" y="{:.2}">{title}</text><text x="{:.2}" y="{:.2}" font-size="10">{detail}</text></g>"#,
            lx + 30.0,
            lx + 38.0,
            y + 4.0,
            lx,
            y + 20.0
        );
    }
    svg.push_str("</svg>\n");
    svg
}
