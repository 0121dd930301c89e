use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::{HarnessError, Verdict};
use crate::polygons::{polygon_csv, svg_overlay, PolygonSeries};
use crate::rational;

/// Version tag of the verdict archive.
pub const REPORT_SCHEMA: &str = "spectra.report/1";

/// Report contents, ready to be written.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportBundle {
    pub json: String,
    pub csv: String,
    /// `(file name, svg)` per component.
    pub svgs: Vec<(String, String)>,
    /// `(file name, csv)` vertex lists per component.
    pub polygons: Vec<(String, String)>,
}

#[derive(Serialize)]
struct Archive<'a> {
    schema: &'static str,
    toolkit_version: &'static str,
    verdicts: &'a [Verdict],
}

/// File-system friendly stem: `H(6,2)^odd` becomes `H_6_2_odd`.
fn stem(v: &Verdict) -> String {
    let s: String = v.component.to_string().chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect();
    let mut out = String::new();
    for part in s.split('_').filter(|p| !p.is_empty()) {
        if !out.is_empty() {
            out.push('_');
        }
        out.push_str(part);
    }
    out
}

/// Builds the JSON archive, the CSV summary and one polygon overlay per verdict.
/// The output depends only on the verdicts.
pub fn render_report(verdicts: &[Verdict]) -> ReportBundle {
    let archive = Archive { schema: REPORT_SCHEMA, toolkit_version: crate::TOOLKIT_VERSION, verdicts };
    let mut json = serde_json::to_string_pretty(&archive).expect("verdicts serialize");
    json.push('\n');

    let mut csv = String::from("component,status,index,lambda,stderr,w,w_exact,lambda_partial,w_partial\n");
    for v in verdicts {
        let status = serde_json::to_value(v.status).expect("status serializes");
        for i in 0..v.lambda.len() {
            let e = &v.w.entries[i];
            writeln!(
                csv,
                "\"{}\",{},{},{},{},{},{},{},{}",
                v.component,
                status.as_str().unwrap_or_default(),
                i + 1,
                v.lambda[i],
                v.stderr[i],
                rational::format_rational(&e.value),
                e.is_exact(),
                v.lambda_partial_sums[i],
                rational::format_rational(&v.w_partial_sums[i]),
            )
            .unwrap();
        }
    }

    let mut svgs = Vec::new();
    let mut polygons = Vec::new();
    for v in verdicts {
        let mut lam = vec![0.0];
        lam.extend(&v.lambda_partial_sums);
        let mut w = vec![0.0];
        w.extend(v.w_partial_sums.iter().map(rational::to_f64));
        let upper = PolygonSeries::new("P_lambda", lam);
        let lower = PolygonSeries::new(if v.w.is_exact() { "P_w" } else { "P_w (bounds)" }, w);
        let name = stem(v);
        svgs.push((format!("{name}.svg"), svg_overlay(&v.component.to_string(), &upper, &lower)));
        polygons.push((format!("{name}.csv"), polygon_csv(&[upper, lower])));
    }
    ReportBundle { json, csv, svgs, polygons }
}

/// Writes `verdicts.json`, `summary.csv`, and per component an SVG overlay
/// and a CSV vertex list into `dir`. Returns the written paths.
pub fn write_report(verdicts: &[Verdict], dir: &Path) -> Result<Vec<PathBuf>, HarnessError> {
    let bundle = render_report(verdicts);
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let mut put = |name: &str, body: &str| -> Result<(), HarnessError> {
        let p = dir.join(name);
        fs::write(&p, body)?;
        written.push(p);
        Ok(())
    };
    put("verdicts.json", &bundle.json)?;
    put("summary.csv", &bundle.csv)?;
    for (name, body) in bundle.svgs.iter().chain(&bundle.polygons) {
        put(name, body)?;
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::verify_component;

    #[test]
    fn empty_report() {
        let b = render_report(&[]);
        let parsed: serde_json::Value = serde_json::from_str(&b.json).unwrap();
        assert_eq!(parsed["schema"], REPORT_SCHEMA);
        assert_eq!(parsed["verdicts"].as_array().unwrap().len(), 0);
        assert_eq!(b.csv.lines().count(), 1);
        assert!(b.svgs.is_empty());
    }

    #[test]
    fn h31_report() {
        let v = verify_component(&"H(3,1)".parse().unwrap(), 50_000, &[4], 20).unwrap();
        let b = render_report(std::slice::from_ref(&v));
        assert_eq!(b.svgs.len(), 1);
        let (name, svg) = &b.svgs[0];
        assert_eq!(name, "H_3_1.svg");
        let lines: Vec<&str> = svg.lines().filter(|l| l.starts_with("<polyline")).collect();
        assert_eq!(lines.len(), 2);
        for l in lines {
            let pts = l.split("points=\"").nth(1).unwrap().trim_end_matches("\"/>");
            assert_eq!(pts.split(' ').count(), 4);
        }
        assert_eq!(render_report(&[v.clone()]), b);
        let dir = tempfile::tempdir().unwrap();
        let files = write_report(&[v], dir.path()).unwrap();
        assert_eq!(files.len(), 4);
        let first = fs::read(dir.path().join("verdicts.json")).unwrap();
        assert_eq!(first, b.json.as_bytes());
    }
}
