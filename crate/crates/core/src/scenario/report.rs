//! Report rendering: aligned text, CSV and structured JSON.

use std::fmt::Write as _;
use std::str::FromStr;

use super::run::{RouteRow, ScenarioReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Csv,
    Structured,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Text => "txt",
            Format::Csv => "csv",
            Format::Structured => "json",
        }
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "csv" => Ok(Format::Csv),
            "structured" | "json" => Ok(Format::Structured),
            other => Err(format!("unknown format `{other}` (expected text, csv or structured)")),
        }
    }
}

pub const CSV_HEADER: [&str; 7] = ["scenario", "observable", "route", "mean", "variance", "stderr", "pass"];

/// Formats `x` rounded to 15 significant digits.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let rounded: f64 = format!("{x:.14e}").parse().expect("round-trips");
    let magnitude = rounded.abs();
    if (1e-4..1e15).contains(&magnitude) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

fn opt_number(x: Option<f64>) -> String {
    x.map(format_number).unwrap_or_default()
}

/// Scenario column for a system: the scenario name, qualified by the
/// system label when several systems are juxtaposed.
fn scenario_label(report: &ScenarioReport, system_label: &str) -> String {
    if report.systems.len() > 1 {
        format!("{}/{system_label}", report.scenario)
    } else {
        report.scenario.clone()
    }
}

fn rows(report: &ScenarioReport) -> impl Iterator<Item = (String, &RouteRow)> {
    report.systems.iter().flat_map(move |s| s.rows.iter().map(move |r| (scenario_label(report, &s.label), r)))
}

pub fn emit_report(report: &ScenarioReport, format: Format) -> String {
    match format {
        Format::Text => emit_text(report),
        Format::Csv => emit_csv(report),
        Format::Structured => {
            let mut out = serde_json::to_string_pretty(report).expect("report serializes");
            out.push('\n');
            out
        }
    }
}

fn emit_csv(report: &ScenarioReport) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(CSV_HEADER).expect("in-memory write");
    for (scenario, row) in rows(report) {
        writer
            .write_record([
                scenario,
                row.observable.clone(),
                row.route.to_string(),
                opt_number(row.result.mean()),
                opt_number(row.result.variance()),
                opt_number(row.result.stderr()),
                row.status.as_str().to_string(),
            ])
            .expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("flush")).expect("utf-8")
}

fn emit_text(report: &ScenarioReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "scenario: {}", report.scenario);
    if let Some(d) = &report.description {
        let _ = writeln!(out, "  {d}");
    }
    for system in &report.systems {
        let _ = writeln!(out);
        let _ = writeln!(out, "system: {} [{}; {}]", system.label, system.system, system.state_kind);
        if let Some(s) = system.sampling {
            let _ = writeln!(out, "  sampling: {} shots, seed {}", s.shots, s.seed);
        }
        let header = ["observable", "route", "mean", "variance", "stderr", "expected", "status"];
        let table: Vec<[String; 7]> = system
            .rows
            .iter()
            .map(|r| {
                let expected = match (r.expected_mean, r.expected_variance) {
                    (None, None) => String::new(),
                    (m, v) => {
                        format!("({}, {})", m.map_or("-".into(), format_number), v.map_or("-".into(), format_number))
                    }
                };
                let status = match &r.result {
                    super::run::RouteResult::Skipped { reason } => format!("skip: {reason}"),
                    _ => r.status.as_str().to_string(),
                };
                [
                    r.observable.clone(),
                    r.route.to_string(),
                    opt_number(r.result.mean()),
                    opt_number(r.result.variance()),
                    opt_number(r.result.stderr()),
                    expected,
                    status,
                ]
            })
            .collect();
        let mut widths = header.map(str::len);
        for row in &table {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let mut s = String::from(" ");
            for (i, (cell, w)) in cells.iter().zip(widths).enumerate() {
                if i + 1 == cells.len() {
                    let _ = write!(s, " {cell}");
                } else {
                    let _ = write!(s, " {cell:<w$}");
                }
            }
            s.trim_end().to_string()
        };
        let _ = writeln!(out, "{}", line(&header.map(String::from)));
        for row in &table {
            let _ = writeln!(out, "{}", line(row));
        }
    }
    if let Some(c) = &report.comparison {
        let _ = writeln!(out);
        let _ = writeln!(out, "comparison: {}", c.verdict);
        for s in &c.systems {
            let _ = writeln!(out, "  {s}");
        }
        let _ = writeln!(out, "  {}", c.note);
    }
    let _ = writeln!(out);
    for w in &report.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    for f in &report.failures {
        let _ = writeln!(out, "failure: {f}");
    }
    let _ = writeln!(
        out,
        "result: {} ({} {}, rng {})",
        if report.passed { "PASS" } else { "FAIL" },
        report.provenance.tool,
        report.provenance.version,
        report.provenance.rng
    );
    out
}
