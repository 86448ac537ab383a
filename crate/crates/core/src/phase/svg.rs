//! Static SVG regime maps with an error heat map on top.
//!
//! Output is a pure function of its input: fixed precision, no timestamps.

use std::fmt::Write;

use super::SweepRow;
use crate::reduction::{beta_sharp, beta_star};

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 70.0;
const TOP: f64 = 50.0;
const PLOT_W: f64 = 480.0;
const PLOT_H: f64 = 360.0;
const ALPHA_MAX: f64 = 2.0;

const GREEN: &str = "#74c476";
const RED: &str = "#de2d26";
const GRAY: &str = "#bdbdbd";
const BLUE: &str = "#6baed6";
const HEAT: &str = "#08306b";
const HEAT_MAX_OPACITY: f64 = 0.85;

/// Which regime partition to draw underneath the heat map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegimeMap {
    /// Simple / hard / impossible for detection.
    Detection,
    /// Simple / hard / open / impossible for recovery.
    Recovery,
}

impl RegimeMap {
    fn title(&self) -> &'static str {
        match self {
            RegimeMap::Detection => "Detection regimes",
            RegimeMap::Recovery => "Recovery regimes",
        }
    }

    /// `(label, colour, polygon in (α, β) coordinates)`.
    fn regions(&self) -> Vec<(&'static str, &'static str, Vec<(f64, f64)>)> {
        let t = 2.0 / 3.0;
        let hard = ("hard", RED, vec![(0.0, 0.0), (t, t), (0.0, 0.5)]);
        match self {
            RegimeMap::Detection => vec![
                ("simple", GREEN, vec![(0.0, 0.5), (2.0, 1.0), (0.0, 1.0)]),
                hard,
                ("impossible", GRAY, vec![(0.0, 0.0), (t, t), (2.0, 1.0), (2.0, 0.0)]),
            ],
            RegimeMap::Recovery => vec![
                ("simple", GREEN, vec![(0.0, 0.5), (1.0, 1.0), (0.0, 1.0)]),
                hard,
                ("open", BLUE, vec![(0.0, 0.5), (t, t), (1.0, 1.0)]),
                ("impossible", GRAY, vec![(0.0, 0.0), (1.0, 1.0), (2.0, 1.0), (2.0, 0.0)]),
            ],
        }
    }
}

fn px(alpha: f64) -> f64 {
    LEFT + alpha / ALPHA_MAX * PLOT_W
}

fn py(beta: f64) -> f64 {
    TOP + (1.0 - beta) * PLOT_H
}

fn points_attr(pts: impl IntoIterator<Item = (f64, f64)>) -> String {
    pts.into_iter()
        .map(|(a, b)| format!("{:.2},{:.2}", px(a), py(b)))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Smallest positive gap between distinct sorted values, or `fallback`.
fn cell_size(values: impl Iterator<Item = f64>, fallback: f64) -> f64 {
    let mut v: Vec<f64> = values.collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v.windows(2).map(|w| w[1] - w[0]).fold(None, |m: Option<f64>, d| Some(m.map_or(d, |m| m.min(d))))
        .unwrap_or(fallback)
}

fn curve(f: impl Fn(f64) -> f64) -> String {
    points_attr((0..=200).map(|i| {
        let a = ALPHA_MAX * i as f64 / 200.0;
        (a, f(a).min(1.0))
    }))
}

/// Renders the regime map for `kind` with `rows` as an alpha-blended heat
/// map of Type-I + Type-II error.
pub fn render_svg(kind: RegimeMap, rows: &[SweepRow]) -> String {
    let mut s = String::new();
    let w = &mut s;
    let _ = writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(w, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        w,
        r#"<defs><clipPath id="plot"><rect x="{LEFT}" y="{TOP}" width="{PLOT_W}" height="{PLOT_H}"/></clipPath></defs>"#
    );
    let mut title = kind.title().to_owned();
    if let Some(r) = rows.first() {
        let _ = write!(title, " (N={}, test={}, scan={}, trials={})", r.n, r.test.as_str(), r.scan_mode.as_str(), r.trials);
    }
    let _ = writeln!(w, r#"<text x="{LEFT}" y="{:.2}" font-size="14">{title}</text>"#, TOP - 20.0);

    let _ = writeln!(w, r#"<g id="regimes">"#);
    for (label, colour, poly) in kind.regions() {
        let _ = writeln!(
            w,
            r#"<polygon class="{label}" points="{}" fill="{colour}" stroke="none"/>"#,
            points_attr(poly)
        );
    }
    let _ = writeln!(w, "</g>");

    let cw = cell_size(rows.iter().map(|r| r.alpha), 0.1);
    let ch = cell_size(rows.iter().map(|r| r.beta), 0.05);
    let _ = writeln!(w, r#"<g id="errors" clip-path="url(#plot)">"#);
    for r in rows {
        let total = r.total_error();
        let _ = writeln!(
            w,
            r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{HEAT}" fill-opacity="{:.4}"><title>alpha={} beta={} type1={} type2={}</title></rect>"#,
            px(r.alpha - cw / 2.0),
            py(r.beta + ch / 2.0),
            cw / ALPHA_MAX * PLOT_W,
            ch * PLOT_H,
            HEAT_MAX_OPACITY * total.min(1.0),
            r.alpha,
            r.beta,
            r.type1,
            r.type2,
        );
    }
    let _ = writeln!(w, "</g>");

    let _ = writeln!(w, r#"<g id="curves" fill="none" stroke="black" stroke-width="1.5" clip-path="url(#plot)">"#);
    let _ = writeln!(w, r#"<polyline class="beta-star" points="{}" stroke-dasharray="6 4"/>"#, curve(beta_star));
    let _ = writeln!(w, r#"<polyline class="beta-sharp" points="{}"/>"#, curve(beta_sharp));
    if kind == RegimeMap::Recovery {
        let _ = writeln!(
            w,
            r#"<polyline class="recovery-simple" points="{}" stroke-dasharray="2 3"/>"#,
            curve(|a| 0.5 + a / 2.0)
        );
    }
    let _ = writeln!(w, "</g>");

    axes(w);
    legend(w, kind);
    let _ = writeln!(w, "</svg>");
    s
}

fn axes(w: &mut String) {
    let _ = writeln!(
        w,
        r#"<rect x="{LEFT}" y="{TOP}" width="{PLOT_W}" height="{PLOT_H}" fill="none" stroke="black"/>"#
    );
    let bottom = TOP + PLOT_H;
    for i in 0..=8 {
        let a = i as f64 * 0.25;
        let x = px(a);
        let _ = writeln!(
            w,
            r#"<line x1="{x:.2}" y1="{bottom:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{a:.2}</text>"#,
            bottom + 5.0,
            bottom + 20.0
        );
    }
    for i in 0..=4 {
        let b = i as f64 * 0.25;
        let y = py(b);
        let _ = writeln!(
            w,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{LEFT:.2}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{b:.2}</text>"#,
            LEFT - 5.0,
            LEFT - 8.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        w,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">alpha (q = N^-alpha)</text>"#,
        LEFT + PLOT_W / 2.0,
        bottom + 42.0
    );
    let _ = writeln!(
        w,
        r#"<text transform="translate({:.2},{:.2}) rotate(-90)" text-anchor="middle">beta (K = N^beta)</text>"#,
        LEFT - 45.0,
        TOP + PLOT_H / 2.0
    );
}

fn legend(w: &mut String, kind: RegimeMap) {
    let x = LEFT + PLOT_W + 25.0;
    let mut y = TOP + 10.0;
    for (label, colour, _) in kind.regions() {
        let _ = writeln!(
            w,
            r#"<rect x="{x:.2}" y="{y:.2}" width="14" height="14" fill="{colour}"/><text x="{:.2}" y="{:.2}">{label}</text>"#,
            x + 20.0,
            y + 11.0
        );
        y += 22.0;
    }
    y += 10.0;
    let _ = writeln!(
        w,
        r#"<line x1="{x:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="black" stroke-dasharray="6 4"/><text x="{:.2}" y="{:.2}">beta*</text>"#,
        x + 30.0,
        x + 36.0,
        y + 4.0
    );
    y += 20.0;
    let _ = writeln!(
        w,
        r#"<line x1="{x:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}">beta#</text>"#,
        x + 30.0,
        x + 36.0,
        y + 4.0
    );
    y += 30.0;
    let _ = writeln!(w, r#"<text x="{x:.2}" y="{y:.2}">type1+type2</text>"#);
    y += 8.0;
    for i in 0..=4 {
        let v = i as f64 / 4.0;
        let _ = writeln!(
            w,
            r#"<rect x="{x:.2}" y="{y:.2}" width="14" height="14" fill="{HEAT}" fill-opacity="{:.4}" stroke="black" stroke-width="0.5"/><text x="{:.2}" y="{:.2}">{}{v:.2}</text>"#,
            HEAT_MAX_OPACITY * v,
            x + 20.0,
            y + 11.0,
            if i == 4 { ">=" } else { "" }
        );
        y += 18.0;
    }
}
