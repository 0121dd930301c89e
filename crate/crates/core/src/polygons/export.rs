use std::fmt::Write;

use serde::Serialize;

/// A labelled vertex chain `(i, heights[i])` for export.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolygonSeries {
    pub label: String,
    pub heights: Vec<f64>,
}

impl PolygonSeries {
    pub fn new(label: impl Into<String>, heights: Vec<f64>) -> Self {
        Self { label: label.into(), heights }
    }
}

/// CSV with header `series,x,y`, one row per vertex.
pub fn polygon_csv(series: &[PolygonSeries]) -> String {
    let mut out = String::from("series,x,y\n");
    for s in series {
        for (x, y) in s.heights.iter().enumerate() {
            writeln!(out, "{},{},{}", csv_field(&s.label), x, y).unwrap();
        }
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

const WIDTH: f64 = 480.0;
const HEIGHT: f64 = 360.0;
const MARGIN: f64 = 48.0;
const COLORS: [&str; 2] = ["#1f77b4", "#d62728"];

/// Two polygons overlaid in one SVG: one `<polyline>` each, every vertex
/// marked and labelled with its height. Output depends only on the inputs.
pub fn svg_overlay(title: &str, upper: &PolygonSeries, lower: &PolygonSeries) -> String {
    let series = [upper, lower];
    let xmax = series.iter().map(|s| s.heights.len().saturating_sub(1)).max().unwrap_or(0).max(1) as f64;
    let ys = series.iter().flat_map(|s| s.heights.iter().copied()).filter(|y| y.is_finite());
    let (ymin, ymax) = ys.fold((0.0f64, 0.0f64), |(lo, hi), y| (lo.min(y), hi.max(y)));
    let yspan = if ymax - ymin > 0.0 { ymax - ymin } else { 1.0 };
    let px = |x: f64| MARGIN + x / xmax * (WIDTH - 2.0 * MARGIN);
    let py = |y: f64| HEIGHT - MARGIN - (y - ymin) / yspan * (HEIGHT - 2.0 * MARGIN);

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )
    .unwrap();
    writeln!(out, r#"<title>{}</title>"#, xml_escape(title)).unwrap();
    writeln!(
        out,
        r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#999" stroke-width="1"/>"##,
        px(0.0),
        py(0.0),
        px(xmax),
        py(0.0)
    )
    .unwrap();
    for (k, s) in series.iter().enumerate() {
        let color = COLORS[k];
        let points: Vec<String> =
            s.heights.iter().enumerate().map(|(x, &y)| format!("{:.2},{:.2}", px(x as f64), py(y))).collect();
        writeln!(
            out,
            r#"<polyline data-series="{}" fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            xml_escape(&s.label),
            points.join(" ")
        )
        .unwrap();
        for (x, &y) in s.heights.iter().enumerate() {
            let (cx, cy) = (px(x as f64), py(y));
            writeln!(out, r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="3" fill="{color}"/>"#).unwrap();
            let dy = if k == 0 { -8.0 } else { 16.0 };
            writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}" font-size="10" fill="{color}" text-anchor="middle">{:.4}</text>"#,
                cx,
                cy + dy,
                y
            )
            .unwrap();
        }
        writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="12" fill="{color}">{}</text>"#,
            MARGIN,
            18.0 + 14.0 * k as f64,
            xml_escape(&s.label)
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv() {
        let s = PolygonSeries::new("w", vec![0.0, 1.0, 1.5]);
        assert_eq!(polygon_csv(&[s]), "series,x,y\nw,0,0\nw,1,1\nw,2,1.5\n");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
    }

    #[test]
    fn svg_structure() {
        let a = PolygonSeries::new("lambda", vec![0.0, 1.0, 1.55, 1.8]);
        let b = PolygonSeries::new("w", vec![0.0, 1.0, 1.5, 1.75]);
        let svg = svg_overlay("H(3,1)", &a, &b);
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert_eq!(svg.matches("<circle").count(), 8);
        assert_eq!(svg, svg_overlay("H(3,1)", &a, &b));
        let first = svg.lines().find(|l| l.starts_with("<polyline")).unwrap();
        let pts = first.split("points=\"").nth(1).unwrap().trim_end_matches("\"/>");
        assert_eq!(pts.split(' ').count(), 4);
    }
}
