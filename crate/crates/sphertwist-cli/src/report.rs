//! Reports: one section per audit run, rendered as JSON or as indented text
//! from the same value tree, so both formats carry the same content.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    /// A consistency check or a theorem-level agreement failed.
    Failed,
    /// The computation stopped at the cap before it could be certified.
    CapExceeded,
    /// An upstream error prevented the audit from running.
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Section {
    pub audit: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    pub checks: Vec<Check>,
    pub data: Map<String, Value>,
}

impl Section {
    pub fn label(&self) -> String {
        match self.t {
            Some(t) => format!("{} t={t}", self.audit),
            None => self.audit.clone(),
        }
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.data.get(key)
    }

    pub fn check(&self, name: &str) -> Option<bool> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.pass)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub exit_code: i32,
    pub failed: Vec<String>,
    pub cap_exceeded: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub scenario: Value,
    pub sections: Vec<Section>,
    pub summary: Summary,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(scenario: Value, sections: Vec<Section>, notes: Vec<String>) -> Report {
        let failed: Vec<String> =
            sections.iter().filter(|s| matches!(s.status, Status::Failed | Status::Error)).map(Section::label).collect();
        let cap_exceeded: Vec<String> = sections.iter().filter(|s| s.status == Status::CapExceeded).map(Section::label).collect();
        let exit_code = if !failed.is_empty() {
            4
        } else if !cap_exceeded.is_empty() {
            3
        } else {
            0
        };
        Report { scenario, sections, summary: Summary { exit_code, failed, cap_exceeded }, notes }
    }

    pub fn exit_code(&self) -> i32 {
        self.summary.exit_code
    }

    /// The first section for `audit` (and `t`, when given).
    pub fn section(&self, audit: &str, t: Option<usize>) -> Option<&Section> {
        self.sections.iter().find(|s| s.audit == audit && (t.is_none() || s.t == t))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

pub fn serialize_report(r: &Report, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(r).expect("reports serialize");
            s.push('\n');
            s.into_bytes()
        }
        Format::Text => render_text(r).into_bytes(),
    }
}

fn render_text(r: &Report) -> String {
    let mut out = String::new();
    out.push_str("scenario\n");
    if let Value::Object(m) = &r.scenario {
        render_map(&mut out, 1, m);
    }
    for s in &r.sections {
        let _ = write!(out, "\n[{}] {}", s.label(), status_word(s.status));
        if let Some(m) = &s.message {
            let _ = write!(out, ": {m}");
        }
        out.push('\n');
        if !s.checks.is_empty() {
            out.push_str("  checks\n");
            for c in &s.checks {
                let _ = writeln!(out, "    {} {}", if c.pass { "pass" } else { "FAIL" }, c.name);
            }
        }
        if !s.data.is_empty() {
            render_map(&mut out, 1, &s.data);
        }
    }
    let _ = write!(out, "\nsummary\n  exit code: {}\n", r.summary.exit_code);
    if !r.summary.failed.is_empty() {
        let _ = writeln!(out, "  failed: {}", r.summary.failed.join(", "));
    }
    if !r.summary.cap_exceeded.is_empty() {
        let _ = writeln!(out, "  cap exceeded: {}", r.summary.cap_exceeded.join(", "));
    }
    for n in &r.notes {
        let _ = writeln!(out, "note: {n}");
    }
    out
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Ok => "ok",
        Status::Failed => "FAILED",
        Status::CapExceeded => "cap exceeded",
        Status::Error => "ERROR",
    }
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Object(_) => false,
        Value::Array(a) => a.iter().all(is_flat),
        _ => true,
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) => format!("[{}]", a.iter().map(inline).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

fn render_map(out: &mut String, depth: usize, m: &Map<String, Value>) {
    for (k, v) in m {
        render_entry(out, depth, k, v);
    }
}

fn render_entry(out: &mut String, depth: usize, key: &str, v: &Value) {
    let pad = "  ".repeat(depth);
    if is_flat(v) {
        let _ = writeln!(out, "{pad}{key}: {}", inline(v));
        return;
    }
    let _ = writeln!(out, "{pad}{key}");
    match v {
        Value::Object(m) => render_map(out, depth + 1, m),
        Value::Array(a) => {
            for (i, item) in a.iter().enumerate() {
                render_entry(out, depth + 1, &format!("[{i}]"), item);
            }
        }
        _ => unreachable!("flat values are handled above"),
    }
}
