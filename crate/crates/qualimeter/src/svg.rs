//! SVG rendering. Output depends only on the inputs: coordinates are
//! printed with two decimals and no timestamps or ids are generated.

use std::fmt::Write as _;

use qualimeter_core::maintain::{LogiscopeMetric, LogiscopeMetrics, ThresholdProfile};
use qualimeter_core::treemap::{cell_hull, NestedCell};

use crate::error::{Error, Result};
use crate::number;

const SIZE: f64 = 520.0;
const RADIUS: f64 = 190.0;
const TABLE_ROW: f64 = 18.0;

pub fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

fn pt(x: f64, y: f64) -> String {
    // avoid "-0.00"
    let f = |v: f64| {
        let s = format!("{v:.2}");
        if s == "-0.00" {
            "0.00".to_string()
        } else {
            s
        }
    };
    format!("{},{}", f(x), f(y))
}

fn bound_text(v: f64) -> String {
    if v == f64::INFINITY {
        "+inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        number::fixed(v).unwrap_or_default()
    }
}

/// Axis length in metric units: the largest finite bound or value, with
/// headroom, so the band and the value share one scale.
fn axis_scale(value: f64, min: f64, max: f64) -> f64 {
    let top = [value.abs(), min, max]
        .into_iter()
        .filter(|v| v.is_finite())
        .fold(1.0_f64, f64::max);
    top * 1.25
}

/// Kiviat diagram of the thirteen class metrics against `profile`. Axes
/// whose status is −1 are drawn with the `alert` class.
pub fn kiviat(title: &str, metrics: &LogiscopeMetrics, status: &[i8; 13], profile: &ThresholdProfile) -> Result<String> {
    let n = LogiscopeMetric::ALL.len();
    let (cx, cy) = (SIZE / 2.0, SIZE / 2.0 + 10.0);
    let height = SIZE + 40.0 + TABLE_ROW * (n as f64 + 1.0);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="11">"#,
        w = SIZE,
        h = height
    );
    s.push_str(
        "<style>.axis{stroke:#999;stroke-width:1}.band{fill:#cfe8cf;fill-opacity:0.6;stroke:#4a8a4a}\
         .hole{fill:#fff;stroke:#4a8a4a}.value{fill:#3366cc;fill-opacity:0.25;stroke:#3366cc;stroke-width:2}\
         .dot{fill:#3366cc}.alert{fill:#cc2222;font-weight:bold}circle.alert{stroke:#cc2222}</style>\n",
    );
    let _ = writeln!(s, r#"<title>{}</title>"#, escape(title));
    let _ = writeln!(
        s,
        r#"<text x="{}" y="18" text-anchor="middle" font-size="14">{}</text>"#,
        SIZE / 2.0,
        escape(title)
    );

    let mut max_ring = Vec::new();
    let mut min_ring = Vec::new();
    let mut value_ring = Vec::new();
    let mut axes = String::new();
    for (i, m) in LogiscopeMetric::ALL.into_iter().enumerate() {
        let b = profile.bound(m).map_err(Error::analysis)?;
        let v = metrics.get(m);
        let scale = axis_scale(v, b.min, b.max);
        let angle = -std::f64::consts::FRAC_PI_2 + i as f64 * std::f64::consts::TAU / n as f64;
        let (dx, dy) = (angle.cos(), angle.sin());
        let at = |x: f64| {
            let r = (x / scale).clamp(0.0, 1.0) * RADIUS;
            pt(cx + r * dx, cy + r * dy)
        };
        max_ring.push(at(b.max));
        min_ring.push(at(b.min));
        value_ring.push(at(v));
        let alert = status[i] == -1;
        let _ = writeln!(
            axes,
            r#"<line class="axis" x1="{cx:.2}" y1="{cy:.2}" x2="{:.2}" y2="{:.2}"/>"#,
            cx + RADIUS * dx,
            cy + RADIUS * dy
        );
        let (lx, ly) = (cx + (RADIUS + 22.0) * dx, cy + (RADIUS + 22.0) * dy);
        let anchor = if dx > 0.2 {
            "start"
        } else if dx < -0.2 {
            "end"
        } else {
            "middle"
        };
        let class = if alert { r#" class="alert""# } else { "" };
        let _ = writeln!(
            axes,
            r#"<text{class} x="{lx:.2}" y="{ly:.2}" text-anchor="{anchor}" data-metric="{}">{}</text>"#,
            m.name(),
            m.name()
        );
    }
    let _ = writeln!(s, r#"<polygon class="band" points="{}"/>"#, max_ring.join(" "));
    let _ = writeln!(s, r#"<polygon class="hole" points="{}"/>"#, min_ring.join(" "));
    s.push_str(&axes);
    let _ = writeln!(s, r#"<polygon class="value" points="{}"/>"#, value_ring.join(" "));
    for (i, p) in value_ring.iter().enumerate() {
        let (x, y) = p.split_once(',').unwrap_or(("0", "0"));
        let class = if status[i] == -1 { "alert" } else { "dot" };
        let _ = writeln!(s, r#"<circle class="{class}" cx="{x}" cy="{y}" r="3.5"/>"#);
    }

    // value table
    let top = SIZE + 30.0;
    let cols = [20.0, 170.0, 270.0, 370.0, 460.0];
    for (x, h) in cols.iter().zip(["metric", "value", "min", "max", "status"]) {
        let _ = writeln!(s, r#"<text x="{x:.2}" y="{top:.2}" font-weight="bold">{h}</text>"#);
    }
    for (i, m) in LogiscopeMetric::ALL.into_iter().enumerate() {
        let b = profile.bound(m).map_err(Error::analysis)?;
        let y = top + TABLE_ROW * (i as f64 + 1.0);
        let class = if status[i] == -1 { r#" class="alert""# } else { "" };
        let cells = [
            m.name().to_string(),
            number::fixed(metrics.get(m)).unwrap_or_else(|| "undefined".into()),
            bound_text(b.min),
            bound_text(b.max),
            status[i].to_string(),
        ];
        for (x, c) in cols.iter().zip(cells) {
            let _ = writeln!(s, r#"<text{class} x="{x:.2}" y="{y:.2}">{}</text>"#, escape(&c));
        }
    }
    s.push_str("</svg>\n");
    Ok(s)
}

const PALETTE: [&str; 10] = [
    "#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462", "#b3de69", "#fccde5", "#d9d9d9", "#bc80bd",
];

/// Nested Voronoi treemap: leaf cells filled, inner cells outlined, with
/// labels at leaf centroids. Coordinates are in sample units.
pub fn treemap(root: &NestedCell, width: u32, height: u32) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {width} {height}" font-family="sans-serif">"#,
        w = width * 2,
        h = height * 2
    );
    let _ = writeln!(s, "<title>{}</title>", escape(&root.name));
    let mut leaf_index = 0usize;
    let mut labels = String::new();
    draw(root, width, 0, &mut leaf_index, &mut s, &mut labels);
    s.push_str(&labels);
    s.push_str("</svg>\n");
    s
}

fn draw(cell: &NestedCell, width: u32, depth: usize, leaf: &mut usize, out: &mut String, labels: &mut String) {
    let hull = cell_hull(width, &cell.samples);
    let points: Vec<String> = hull.iter().map(|(x, y)| pt(*x, *y)).collect();
    if cell.children.is_empty() {
        let fill = PALETTE[*leaf % PALETTE.len()];
        *leaf += 1;
        if !points.is_empty() {
            let _ = writeln!(
                out,
                r##"<polygon points="{}" fill="{fill}" stroke="#333" stroke-width="0.5" data-path="{}"/>"##,
                points.join(" "),
                escape(&cell.path)
            );
        }
        if !cell.samples.is_empty() {
            let n = cell.samples.len() as f64;
            let (sx, sy) = cell.samples.iter().fold((0.0, 0.0), |(a, b), &p| {
                (a + (p % width) as f64 + 0.5, b + (p / width) as f64 + 0.5)
            });
            let font = (n.sqrt() / 4.0).clamp(2.0, 14.0);
            let _ = writeln!(
                labels,
                r#"<text x="{:.2}" y="{:.2}" font-size="{font:.2}" text-anchor="middle">{}</text>"#,
                sx / n,
                sy / n,
                escape(&qualimeter_core::treemap::label(cell))
            );
        }
    } else {
        for c in &cell.children {
            draw(c, width, depth + 1, leaf, out, labels);
        }
        if !points.is_empty() {
            let stroke = (3.0 - depth as f64).max(0.75);
            let _ = writeln!(
                out,
                r##"<polygon points="{}" fill="none" stroke="#000" stroke-width="{stroke:.2}" data-path="{}"/>"##,
                points.join(" "),
                escape(&cell.path)
            );
        }
    }
}
