//! Self-contained SVG figure of a product on the disc.

use std::fmt::Write as _;

use blaschke_core::hyperbolic::{geodesic_point, HullKind, HyperbolicHull};
use blaschke_core::{Complex64, FiniteBlaschkeProduct};

const EDGE_SAMPLES: usize = 64;
const MARK: f64 = 0.022;

fn xy(z: Complex64) -> (String, String) {
    // SVG's y axis points down; adding 0.0 turns -0.0 into 0.0
    let fmt = |v: f64| {
        let s = format!("{:.6}", v + 0.0);
        if s == "-0.000000" {
            "0.000000".to_string()
        } else {
            s
        }
    };
    (fmt(z.re), fmt(-z.im))
}

fn label(out: &mut String, z: Complex64, m: usize, class: &str) {
    if m > 1 {
        let (x, y) = xy(z + Complex64::new(0.03, 0.03));
        let _ = writeln!(out, r#"  <text class="{class}" x="{x}" y="{y}">{m}</text>"#);
    }
}

pub fn render(
    b: &FiniteBlaschkeProduct,
    hull: &HyperbolicHull,
    critical: &[(Complex64, usize)],
) -> String {
    let mut out = String::new();
    out.push_str(
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="-1.05 -1.05 2.1 2.1" width="600" height="600">
  <style>
    .circle { fill: none; stroke: #222; stroke-width: 0.006 }
    .hull { fill: #3b7dd8; fill-opacity: 0.12; stroke: #3b7dd8; stroke-width: 0.006 }
    .zero { fill: #c0392b }
    .critical { stroke: #1e8449; stroke-width: 0.008 }
    text { font-family: sans-serif; font-size: 0.05px }
  </style>
  <circle class="circle" cx="0" cy="0" r="1"/>
"#,
    );

    if hull.kind != HullKind::Point {
        let mut points = Vec::new();
        for (a, c) in hull.edges() {
            for j in 0..EDGE_SAMPLES {
                let (x, y) = xy(geodesic_point(a, c, j as f64 / (EDGE_SAMPLES - 1) as f64));
                points.push(format!("{x},{y}"));
            }
        }
        let tag = if hull.kind == HullKind::Polygon {
            "polygon"
        } else {
            "polyline"
        };
        let _ = writeln!(
            out,
            r#"  <{tag} class="hull" points="{}"/>"#,
            points.join(" ")
        );
    }

    for (z, m) in b.distinct_zeros() {
        let (x, y) = xy(z);
        let _ = writeln!(
            out,
            r#"  <circle class="zero" cx="{x}" cy="{y}" r="{MARK}"/>"#
        );
        label(&mut out, z, m, "zero-label");
    }
    for &(z, m) in critical {
        let d = Complex64::new(MARK, MARK);
        let e = Complex64::new(MARK, -MARK);
        let (x1, y1) = xy(z - d);
        let (x2, y2) = xy(z + d);
        let (x3, y3) = xy(z - e);
        let (x4, y4) = xy(z + e);
        let _ = writeln!(
            out,
            r#"  <path class="critical" d="M{x1} {y1} L{x2} {y2} M{x3} {y3} L{x4} {y4}"/>"#
        );
        label(&mut out, z, m, "critical-label");
    }
    out.push_str("</svg>\n");
    out
}
