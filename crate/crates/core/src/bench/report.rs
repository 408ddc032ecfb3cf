//! Report files: JSON (records and tables), CSV (flat speedup rows) and SVG
//! (log-log speedup chart per table).

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::record::BenchRecord;
use super::speedup::{compute_speedup_tables, SpeedupTable};
use crate::error::{Error, Result};

pub const SCHEMA: &str = "unifft-bench/1";
pub const JSON_FILE: &str = "report.json";
pub const CSV_FILE: &str = "speedup.csv";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ReportFormat {
    Json,
    Csv,
    Svg,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            "svg" => Ok(ReportFormat::Svg),
            other => Err(format!(
                "unknown format `{other}` (expected json, csv or svg)"
            )),
        }
    }
}

pub fn parse_formats(s: &str) -> Result<BTreeSet<ReportFormat>, String> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(str::parse)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub version: String,
    pub records: Vec<BenchRecord>,
    pub tables: Vec<SpeedupTable>,
}

impl Report {
    pub fn from_records(records: Vec<BenchRecord>) -> Result<Self> {
        let tables = compute_speedup_tables(&records)?;
        Ok(Self {
            schema: SCHEMA.to_string(),
            version: crate::VERSION.to_string(),
            records,
            tables,
        })
    }

    pub fn from_json(text: &str, path: &Path) -> Result<Self> {
        let report: Report = serde_json::from_str(text).map_err(|source| Error::Json {
            path: path.to_path_buf(),
            source,
        })?;
        if report.schema != SCHEMA {
            return Err(Error::InvalidRecord(format!(
                "{}: unsupported schema `{}`",
                path.display(),
                report.schema
            )));
        }
        for r in &report.records {
            r.validate()?;
        }
        Ok(report)
    }
}

fn write(path: PathBuf, contents: &str) -> Result<PathBuf> {
    fs::write(&path, contents).map_err(|source| Error::Io {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}

fn dims_label(dims: &[usize]) -> String {
    dims.iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join("x")
}

/// Writes the requested formats into `out_dir` (created if missing) and
/// returns the written paths.
pub fn emit_report(
    report: &Report,
    out_dir: &Path,
    formats: &BTreeSet<ReportFormat>,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir).map_err(|source| Error::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let mut written = Vec::new();
    for format in formats {
        match format {
            ReportFormat::Json => {
                let text = serde_json::to_string_pretty(report).expect("report serializes");
                written.push(write(out_dir.join(JSON_FILE), &text)?);
            }
            ReportFormat::Csv => {
                written.push(write(out_dir.join(CSV_FILE), &to_csv(&report.tables))?);
            }
            ReportFormat::Svg => {
                for t in &report.tables {
                    let name = format!(
                        "speedup_{}_{}_{}.svg",
                        dims_label(&t.dims),
                        t.direction,
                        t.variant
                    );
                    written.push(write(out_dir.join(name), &to_svg(t))?);
                }
            }
        }
    }
    Ok(written)
}

pub fn to_csv(tables: &[SpeedupTable]) -> String {
    let mut out = String::from("dims,backend,variant,direction,n_p,median_s,speedup\n");
    for t in tables {
        for (series, by_np) in &t.speedup {
            for (n_p, s) in by_np {
                let median = t.median_seconds[series][n_p];
                let _ = writeln!(
                    out,
                    "{},{series},{},{},{n_p},{median:e},{s}",
                    dims_label(&t.dims),
                    t.variant,
                    t.direction
                );
            }
        }
    }
    out
}

const COLORS: &[&str] = &[
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

/// Log-log chart of speedup against rank count with an ideal `S = n_p` line.
pub fn to_svg(table: &SpeedupTable) -> String {
    let (w, h, margin) = (640.0, 480.0, 60.0);
    let nps: Vec<f64> = table
        .speedup
        .values()
        .flat_map(|m| m.keys().map(|&n| n as f64))
        .collect();
    let ss: Vec<f64> = table
        .speedup
        .values()
        .flat_map(|m| m.values().copied())
        .collect();
    let x_lo = nps.iter().copied().fold(f64::INFINITY, f64::min).log10();
    let x_hi = nps
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max)
        .log10();
    let y_lo = ss
        .iter()
        .chain(&nps)
        .copied()
        .fold(f64::INFINITY, f64::min)
        .log10();
    let y_hi = ss
        .iter()
        .chain(&nps)
        .copied()
        .fold(f64::NEG_INFINITY, f64::max)
        .log10();
    let pad = |lo: f64, hi: f64| {
        if hi - lo < 1e-9 {
            (lo - 0.5, hi + 0.5)
        } else {
            (lo, hi)
        }
    };
    let (x_lo, x_hi) = pad(x_lo, x_hi);
    let (y_lo, y_hi) = pad(y_lo, y_hi);
    let px = |n: f64| margin + (n.log10() - x_lo) / (x_hi - x_lo) * (w - 2.0 * margin);
    let py = |s: f64| h - margin - (s.log10() - y_lo) / (y_hi - y_lo) * (h - 2.0 * margin);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(
        svg,
        r#"<title>Speedup {} {} {}</title>"#,
        dims_label(&table.dims),
        table.direction,
        table.variant
    );
    let _ = writeln!(
        svg,
        r#"<rect x="{margin}" y="{margin}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        w - 2.0 * margin,
        h - 2.0 * margin
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle">number of processes</text>"#,
        w / 2.0,
        h - 15.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="15" y="{}" transform="rotate(-90 15 {})" text-anchor="middle">speedup</text>"#,
        h / 2.0,
        h / 2.0
    );

    let all_np: BTreeSet<usize> = table
        .speedup
        .values()
        .flat_map(|m| m.keys().copied())
        .collect();
    for &n in &all_np {
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{}" text-anchor="middle" font-size="11">{n}</text>"#,
            px(n as f64),
            h - margin + 15.0
        );
    }

    let ideal: Vec<String> = all_np
        .iter()
        .map(|&n| format!("{:.2},{:.2}", px(n as f64), py(n as f64)))
        .collect();
    let _ = writeln!(
        svg,
        r#"<polyline class="ideal" points="{}" fill="none" stroke="gray" stroke-dasharray="6,4"/>"#,
        ideal.join(" ")
    );

    for (i, (series, by_np)) in table.speedup.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let pts: Vec<String> = by_np
            .iter()
            .map(|(&n, &s)| format!("{:.2},{:.2}", px(n as f64), py(s)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline class="series" data-series="{series}" points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
            pts.join(" ")
        );
        for (&n, &s) in by_np {
            let _ = writeln!(
                svg,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#,
                px(n as f64),
                py(s)
            );
        }
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" fill="{color}" font-size="12">{series}</text>"#,
            margin + 10.0,
            margin + 18.0 * (i as f64 + 1.0)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// Reads every `*.json` report in `dir` (sorted by file name) and returns
/// their records.
pub fn load_records(dir: &Path) -> Result<Vec<BenchRecord>> {
    let io = |source| Error::Io {
        path: dir.to_path_buf(),
        source,
    };
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io)?
        .collect::<std::io::Result<Vec<_>>>()
        .map_err(io)?
        .into_iter()
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    paths.sort();
    let mut records = Vec::new();
    for p in paths {
        let text = fs::read_to_string(&p).map_err(|source| Error::Io {
            path: p.clone(),
            source,
        })?;
        records.extend(Report::from_json(&text, &p)?.records);
    }
    if records.is_empty() {
        return Err(Error::EmptyInput(format!(
            "no benchmark records in {}",
            dir.display()
        )));
    }
    Ok(records)
}
