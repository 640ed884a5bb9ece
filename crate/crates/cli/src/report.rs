use std::fmt::Write as _;
use std::time::Duration;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub witness: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub checks: Vec<Check>,
    pub output: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<String>,
}

impl Report {
    pub fn new(command: String) -> Self {
        Self {
            command,
            checks: Vec::new(),
            output: Vec::new(),
            timing: None,
        }
    }

    pub fn check(&mut self, name: impl Into<String>, status: Status, witness: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            status,
            witness: witness.into(),
        });
    }

    pub fn pass_if(&mut self, name: impl Into<String>, ok: bool, witness: impl Into<String>) {
        self.check(name, Status::from_bool(ok), witness);
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.output.push(s.into());
    }

    /// Adds each line of a multi-line block.
    pub fn block(&mut self, s: &str) {
        self.output.extend(s.lines().map(str::to_string));
    }

    pub fn set_timing(&mut self, d: Duration) {
        self.timing = Some(format!("{} ms", d.as_millis()));
    }

    pub fn failed(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("command: {}\n", self.command);
        for c in &self.checks {
            let _ = write!(out, "{:<12} {}", c.status.label(), c.name);
            if !c.witness.is_empty() {
                let _ = write!(out, ": {}", c.witness);
            }
            out.push('\n');
        }
        for l in &self.output {
            out += l;
            out.push('\n');
        }
        if let Some(t) = &self.timing {
            let _ = writeln!(out, "timing: {t}");
        }
        out
    }

    pub fn render_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is plain data")
    }
}
