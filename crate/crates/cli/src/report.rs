//! Command results, their pass/fail checks, and the three output formats.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::Formatter;

use crate::args::Format;
use crate::config::ExperimentConfig;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    /// The check's precondition does not hold at this point.
    #[serde(rename = "n/a")]
    NotApplicable,
    /// Worth a look but not a failure (e.g. a rare statistical excursion).
    #[serde(rename = "flag")]
    Flagged,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::NotApplicable => "N/A",
            Status::Flagged => "FLAG",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub x: Option<u64>,
    pub y: Option<u64>,
    pub status: Status,
    pub value: Option<f64>,
    pub limit: Option<f64>,
    pub detail: String,
}

impl Check {
    pub fn at(name: &str, x: u64, y: u64) -> CheckBuilder {
        CheckBuilder(Check {
            name: name.into(),
            x: Some(x),
            y: Some(y),
            status: Status::NotApplicable,
            value: None,
            limit: None,
            detail: String::new(),
        })
    }

    pub fn global(name: &str) -> CheckBuilder {
        CheckBuilder(Check {
            name: name.into(),
            x: None,
            y: None,
            status: Status::NotApplicable,
            value: None,
            limit: None,
            detail: String::new(),
        })
    }
}

pub struct CheckBuilder(Check);

impl CheckBuilder {
    /// `value <= limit`
    pub fn at_most(mut self, value: f64, limit: f64) -> Check {
        self.0.value = Some(value);
        self.0.limit = Some(limit);
        self.0.status = Status::from_bool(value <= limit);
        self.0
    }

    pub fn status(mut self, status: Status) -> Check {
        self.0.status = status;
        self.0
    }

    pub fn detail(mut self, detail: impl Into<String>) -> Self {
        self.0.detail = detail.into();
        self
    }

    pub fn value(mut self, value: f64) -> Self {
        self.0.value = Some(value);
        self
    }
}

/// Rows for the text and CSV renderings.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table {
            headers: headers.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }
}

pub struct Report {
    pub command: &'static str,
    pub results: serde_json::Value,
    pub table: Table,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }
}

/// Writes every float with 17 significant digits.
struct Precise;

impl Formatter for Precise {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        write!(w, "{v:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, v: f32) -> io::Result<()> {
        self.write_f64(w, v as f64)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Precise);
    value.serialize(&mut ser).expect("report serialises");
    String::from_utf8(out).expect("JSON is UTF-8")
}

#[derive(Serialize)]
struct Envelope<'a> {
    schema_version: u32,
    command: &'a str,
    code_version: String,
    config_hash: String,
    config: &'a ExperimentConfig,
    results: &'a serde_json::Value,
    checks: &'a [Check],
    passed: bool,
}

pub fn code_version() -> String {
    format!("smoothek {} / cli {}", smoothek::VERSION, env!("CARGO_PKG_VERSION"))
}

/// The part of a report compared against stored baselines.
pub fn payload(report: &Report) -> String {
    to_json(&(&report.results, &report.checks))
}

pub fn render_json(report: &Report, cfg: &ExperimentConfig) -> String {
    to_json(&Envelope {
        schema_version: SCHEMA_VERSION,
        command: report.command,
        code_version: code_version(),
        config_hash: cfg.hash(report.command),
        config: cfg,
        results: &report.results,
        checks: &report.checks,
        passed: report.passed(),
    })
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn render_csv(table: &Table) -> String {
    let mut out = String::new();
    let line = |cells: &[String]| cells.iter().map(|c| csv_field(c)).collect::<Vec<_>>().join(",");
    out.push_str(&line(&table.headers));
    out.push('\n');
    for r in &table.rows {
        out.push_str(&line(r));
        out.push('\n');
    }
    out
}

pub fn render_text(report: &Report) -> String {
    let t = &report.table;
    let mut widths: Vec<usize> = t.headers.iter().map(|h| h.chars().count()).collect();
    for r in &t.rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let mut out = String::new();
    let line = |cells: &[String], out: &mut String| {
        let parts: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c:>w$}"))
            .collect();
        out.push_str(parts.join("  ").trim_end());
        out.push('\n');
    };
    line(&t.headers, &mut out);
    for r in &t.rows {
        line(r, &mut out);
    }
    if !report.checks.is_empty() {
        out.push('\n');
        for c in &report.checks {
            let at = match (c.x, c.y) {
                (Some(x), Some(y)) => format!(" (x={x}, y={y})"),
                _ => String::new(),
            };
            let bound = match (c.value, c.limit) {
                (Some(v), Some(l)) => format!(": {} <= {}", num(v), num(l)),
                (Some(v), None) => format!(": {}", num(v)),
                _ => String::new(),
            };
            let detail = if c.detail.is_empty() {
                String::new()
            } else {
                format!("  [{}]", c.detail)
            };
            out.push_str(&format!("{:<4} {}{at}{bound}{detail}\n", c.status.label(), c.name));
        }
        let failed = report.checks.iter().filter(|c| c.status == Status::Fail).count();
        out.push_str(&format!(
            "{} checks, {} failed\n",
            report.checks.len(),
            failed
        ));
    }
    out
}

pub fn render(report: &Report, cfg: &ExperimentConfig) -> String {
    match cfg.format {
        Format::Json => {
            let mut s = render_json(report, cfg);
            s.push('\n');
            s
        }
        Format::Csv => render_csv(&report.table),
        Format::Text => render_text(report),
    }
}

/// Human-oriented number formatting for tables.
pub fn num(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if !v.is_finite() {
        format!("{v}")
    } else if v.abs() < 1e-3 || v.abs() >= 1e7 {
        format!("{v:.4e}")
    } else {
        format!("{v:.6}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_keep_seventeen_digits() {
        let s = to_json(&serde_json::json!({"a": 0.1, "b": 1.0 / 3.0, "n": 7, "z": f64::NAN}));
        assert_eq!(
            s,
            r#"{"a":1.0000000000000001e-1,"b":3.3333333333333331e-1,"n":7,"z":null}"#
        );
        let back: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["b"].as_f64().unwrap(), 1.0 / 3.0);
    }

    #[test]
    fn csv_quoting() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["1,2".into(), "x".into()]);
        assert_eq!(render_csv(&t), "a,b\n\"1,2\",x\n");
    }

    #[test]
    fn check_builder() {
        let c = Check::at("gap", 10, 2).at_most(0.5, 1.0);
        assert_eq!(c.status, Status::Pass);
        let c = Check::global("gap").at_most(2.0, 1.0);
        assert_eq!(c.status, Status::Fail);
    }
}
