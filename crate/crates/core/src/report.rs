//! Line-delimited JSON reports.
//!
//! Every line is one object carrying `schema` and `kind`. Nothing
//! time- or host-dependent is written, so identical runs give identical bytes.

use serde::Serialize;
use std::io::Write;
use std::path::Path;

pub const SCHEMA: &str = "zblab.report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn is_pass(self) -> bool {
        self == Status::Pass
    }
}

/// One named numerical check: `measured <= tolerance` passes. A NaN
/// measurement fails.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            tolerance,
            status: Status::from_bool(measured <= tolerance),
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: &'static str,
    kind: &'a str,
    #[serde(flatten)]
    body: &'a T,
}

/// Accumulates report lines in memory; written out once at the end.
#[derive(Debug, Default, Clone)]
pub struct Report {
    lines: Vec<String>,
    failures: Vec<String>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record<T: Serialize>(&mut self, kind: &str, body: &T) {
        let line = serde_json::to_string(&Envelope {
            schema: SCHEMA,
            kind,
            body,
        })
        .expect("report records serialize");
        self.lines.push(line);
    }

    pub fn check(&mut self, check: Check) {
        if !check.status.is_pass() {
            self.failures.push(check.name.clone());
        }
        self.record("check", &check);
    }

    pub fn fail(&mut self, name: impl Into<String>) {
        self.failures.push(name.into());
    }

    pub fn failures(&self) -> &[String] {
        &self.failures
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn lines(&self) -> &[String] {
        &self.lines
    }

    pub fn to_text(&self) -> String {
        let mut s = self.lines.join("\n");
        if !s.is_empty() {
            s.push('\n');
        }
        s
    }

    pub fn write_to(&self, path: &Path) -> std::io::Result<()> {
        let mut f = std::fs::File::create(path)?;
        f.write_all(self.to_text().as_bytes())
    }
}
