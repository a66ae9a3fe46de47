//! Report stream: JSON Lines or a plain table, plus the aggregate exit status.

use std::io::Write;
use std::time::Duration;

use qch_core::report::{Outcome, Status};
use serde::Serialize;

#[derive(Clone, Debug, Default, Serialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub degrees: Vec<usize>,
    pub primes: usize,
    pub seed: u64,
}

#[derive(Serialize)]
struct Report<'a> {
    check: &'a str,
    params: &'a Params,
    status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    residual: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    failure_bound: Option<f64>,
    #[serde(skip_serializing_if = "<[u64]>::is_empty")]
    sampled_primes: &'a [u64],
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<&'a str>,
    elapsed_ms: u64,
}

pub struct Sink {
    json: bool,
    header: bool,
    failures: Vec<String>,
}

impl Sink {
    pub fn new(json: bool) -> Self {
        Self { json, header: false, failures: Vec::new() }
    }

    /// Emits `outcomes` in order. An outcome without its own timing is
    /// charged the wall time of the batch that produced it.
    pub fn emit(&mut self, params: &Params, outcomes: &[Outcome], batch: Duration) {
        let stdout = std::io::stdout();
        let mut out = stdout.lock();
        for o in outcomes {
            let line = line(params, o, batch);
            if !o.ok() {
                self.failures.push(line.clone());
            }
            if self.json {
                let _ = writeln!(out, "{line}");
            } else {
                if !self.header {
                    let _ = writeln!(out, "{:<14} {:>9}  CHECK", "STATUS", "MS");
                    self.header = true;
                }
                let status = match o.status {
                    Status::Pass => "pass",
                    Status::ProbablePass => "probable-pass",
                    Status::Fail => "FAIL",
                };
                let mut note = String::new();
                if let Some(b) = o.failure_bound {
                    note.push_str(&format!("  [bound {b:.1e}]"));
                }
                if let Some(res) = &o.residual {
                    note.push_str(&format!("  residual: {}", clip(res, 160)));
                } else if let Some(d) = &o.detail {
                    note.push_str(&format!("  ({})", clip(d, 100)));
                }
                let _ = writeln!(out, "{:<14} {:>9}  {}{}", status, elapsed_ms(o, batch), o.name, note);
            }
        }
        let _ = out.flush();
    }

    /// Tracks `outcomes` for the exit status without printing them.
    pub fn record(&mut self, params: &Params, outcomes: &[Outcome], batch: Duration) {
        for o in outcomes.iter().filter(|o| !o.ok()) {
            self.failures.push(line(params, o, batch));
        }
    }

    /// 0 when every report is ok; otherwise prints the failing reports on
    /// stderr and returns 1.
    pub fn finish(self) -> i32 {
        if self.failures.is_empty() {
            return 0;
        }
        let stderr = std::io::stderr();
        let mut err = stderr.lock();
        for f in &self.failures {
            let _ = writeln!(err, "{f}");
        }
        1
    }
}

fn elapsed_ms(o: &Outcome, batch: Duration) -> u64 {
    o.elapsed.unwrap_or(batch).as_millis() as u64
}

fn line(params: &Params, o: &Outcome, batch: Duration) -> String {
    let r = Report {
        check: &o.name,
        params,
        status: o.status,
        residual: o.residual.as_deref(),
        failure_bound: o.failure_bound,
        sampled_primes: &o.primes,
        detail: o.detail.as_deref(),
        elapsed_ms: elapsed_ms(o, batch),
    };
    serde_json::to_string(&r).expect("report serializes")
}

fn clip(s: &str, max: usize) -> String {
    if s.chars().count() <= max {
        s.to_string()
    } else {
        let head: String = s.chars().take(max).collect();
        format!("{head}…")
    }
}
