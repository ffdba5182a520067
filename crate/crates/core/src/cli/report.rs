//! Per-item results and their text / json-lines rendering.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Fail,
    Inconclusive,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    JsonLines,
}

/// One processed item. Field order is the json-lines field order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub name: String,
    pub status: Status,
    pub steps: u64,
    pub axioms: Vec<String>,
    pub mode: String,
    /// Printed terms and messages.
    pub derived: Vec<String>,
    pub elapsed_ms: f64,
}

impl Report {
    pub fn new(name: impl Into<String>, mode: impl Into<String>, status: Status) -> Report {
        Report {
            name: name.into(),
            status,
            steps: 0,
            axioms: Vec::new(),
            mode: mode.into(),
            derived: Vec::new(),
            elapsed_ms: 0.0,
        }
    }

    pub fn note(mut self, line: impl Into<String>) -> Report {
        self.derived.push(line.into());
        self
    }
}

pub fn emit_report(reports: &[Report], format: Format) -> String {
    let mut out = String::new();
    for r in reports {
        match format {
            Format::JsonLines => {
                out.push_str(&serde_json::to_string(r).expect("reports serialize"));
                out.push('\n');
            }
            Format::Text => {
                let axioms = if r.axioms.is_empty() { "-".to_string() } else { r.axioms.join(",") };
                out.push_str(&format!(
                    "{:<12} {:<24} {:<9} steps={:<9} axioms={} ({:.1} ms)\n",
                    r.status.as_str(),
                    r.name,
                    r.mode,
                    r.steps,
                    axioms,
                    r.elapsed_ms
                ));
                for d in &r.derived {
                    out.push_str("    ");
                    out.push_str(d);
                    out.push('\n');
                }
            }
        }
    }
    out
}

/// 0 when nothing failed, 1 otherwise.
pub fn exit_code(reports: &[Report]) -> i32 {
    if reports.iter().any(|r| r.status == Status::Fail) {
        1
    } else {
        0
    }
}
