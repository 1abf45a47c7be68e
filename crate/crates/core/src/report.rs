//! Suite reports: named checks with a status, a residual summary and wall
//! time, rendered as text or JSON.

use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::check::SymbolicCheck;
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub residual: Option<String>,
    pub ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<CheckResult>,
}

fn millis(t: Instant) -> f64 {
    (t.elapsed().as_secs_f64() * 1e6).round() / 1e3
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>) -> Self {
        SuiteReport {
            suite: suite.into(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, name: impl Into<String>, status: Status, residual: Option<String>, ms: f64) {
        self.checks.push(CheckResult {
            name: name.into(),
            status,
            residual,
            ms,
        });
    }

    /// Runs one numeric or structural check; an error is a FAIL carrying the
    /// error message.
    pub fn run<F>(&mut self, name: impl Into<String>, f: F)
    where
        F: FnOnce() -> Result<(bool, Option<String>)>,
    {
        let t = Instant::now();
        let (status, residual) = match f() {
            Ok((true, r)) => (Status::Pass, r),
            Ok((false, r)) => (Status::Fail, r),
            Err(e) => (Status::Fail, Some(format!("error: {e}"))),
        };
        self.push(name, status, residual, millis(t));
    }

    /// Runs one exact check.
    pub fn run_symbolic<F>(&mut self, name: impl Into<String>, f: F)
    where
        F: FnOnce() -> Result<Vec<crate::Expr>>,
    {
        self.run(name, || {
            let c = SymbolicCheck::new("", f()?);
            Ok((c.passed(), c.residual_summary()))
        });
    }

    /// Runs a batch producing several exact checks. Wall time of the batch
    /// is split evenly among its checks. If the batch fails as a whole it is
    /// recorded as one FAIL under `label`.
    pub fn run_batch<F>(&mut self, label: impl Into<String>, f: F)
    where
        F: FnOnce() -> Result<Vec<SymbolicCheck>>,
    {
        let t = Instant::now();
        match f() {
            Ok(checks) => {
                let ms = millis(t) / checks.len().max(1) as f64;
                let ms = (ms * 1e3).round() / 1e3;
                for c in checks {
                    let status = if c.passed() { Status::Pass } else { Status::Fail };
                    let residual = c.residual_summary();
                    self.push(c.name, status, residual, ms);
                }
            }
            Err(e) => self.push(label, Status::Fail, Some(format!("error: {e}")), millis(t)),
        }
    }

    pub fn count(&self, s: Status) -> usize {
        self.checks.iter().filter(|c| c.status == s).count()
    }

    pub fn passed(&self) -> bool {
        self.count(Status::Fail) == 0
    }

    /// 0 when nothing failed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<SuiteReport> {
        serde_json::from_str(s)
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {}", self.suite)?;
        for c in &self.checks {
            write!(f, "  {} {} ({:.1} ms)", c.status, c.name, c.ms)?;
            if let Some(r) = &c.residual {
                write!(f, ": {r}")?;
            }
            writeln!(f)?;
        }
        write!(
            f,
            "{} passed, {} failed, {} skipped",
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Skip)
        )
    }
}
