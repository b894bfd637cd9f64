//! The report every command prints: version, config echo, an optional result
//! payload and the timed checks.

use crate::config::{Config, Output};
use gralg::report::{CheckOutcome, Status};
use serde::Serialize;
use serde_json::Value;
use std::time::Instant;

#[derive(Debug, Serialize)]
pub struct TimedCheck {
    /// The call that produced this outcome.
    pub group: String,
    #[serde(flatten)]
    pub outcome: CheckOutcome,
    /// Wall time of the whole group; excluded from the determinism contract.
    pub timing_ms: f64,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub version: &'static str,
    /// Arguments after the program name, so the run can be replayed.
    pub argv: Vec<String>,
    pub config: Config,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    pub checks: Vec<TimedCheck>,
    pub summary: Summary,
    /// Set when a resource limit stopped a check from reaching a verdict.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub incomplete: Option<String>,
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

impl Report {
    pub fn new(argv: Vec<String>, config: Config) -> Self {
        Report {
            version: env!("CARGO_PKG_VERSION"),
            argv,
            config,
            result: None,
            checks: Vec::new(),
            summary: Summary::default(),
            incomplete: None,
        }
    }

    /// Run `f`, timing it, and record its outcomes under `group`.
    pub fn run<F>(&mut self, group: &str, f: F)
    where
        F: FnOnce() -> Vec<CheckOutcome>,
    {
        let start = Instant::now();
        let outcomes = f();
        let timing_ms = start.elapsed().as_secs_f64() * 1e3;
        self.extend(group, outcomes, timing_ms);
    }

    pub fn extend(&mut self, group: &str, outcomes: Vec<CheckOutcome>, timing_ms: f64) {
        for outcome in outcomes {
            match outcome.status {
                Status::Pass => self.summary.passed += 1,
                Status::Fail => self.summary.failed += 1,
                Status::Skipped => self.summary.skipped += 1,
            }
            self.checks.push(TimedCheck {
                group: group.to_string(),
                outcome,
                timing_ms,
            });
        }
    }

    /// 0 when every check passed, 1 on any counterexample, 2 when a resource
    /// limit left a check undecided.
    pub fn exit_code(&self) -> u8 {
        if self.summary.failed > 0 {
            1
        } else if self.incomplete.is_some() {
            2
        } else {
            0
        }
    }

    pub fn render(&self) -> String {
        match self.config.output {
            Output::Json => serde_json::to_string_pretty(self).expect("report serializes"),
            Output::Text => self.render_text(),
        }
    }

    fn render_text(&self) -> String {
        let c = &self.config;
        let mut out = format!(
            "gralg {} — {}\nconfig: n={} seed={} atom_bound={} sample_count={} depth={}\n",
            self.version,
            self.argv.join(" "),
            c.n,
            c.seed,
            c.atom_bound,
            c.sample_count,
            c.depth
        );
        match &self.result {
            Some(Value::String(s)) => out.push_str(&format!("{s}\n")),
            Some(v) => out.push_str(&format!(
                "{}\n",
                serde_json::to_string_pretty(v).expect("value serializes")
            )),
            None => {}
        }
        for check in &self.checks {
            let o = &check.outcome;
            let tag = match o.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skipped => "SKIP",
            };
            out.push_str(&format!(
                "{tag}  {}/{}  {}  ({:.1} ms)\n",
                check.group, o.name, o.detail, check.timing_ms
            ));
            if let Some(cex) = &o.counterexample {
                out.push_str(&format!("      counterexample: {cex}\n"));
            }
        }
        if let Some(why) = &self.incomplete {
            out.push_str(&format!("incomplete: {why}\n"));
        }
        if !self.checks.is_empty() {
            let s = self.summary;
            out.push_str(&format!(
                "{} passed, {} failed, {} skipped\n",
                s.passed, s.failed, s.skipped
            ));
        }
        out
    }
}
