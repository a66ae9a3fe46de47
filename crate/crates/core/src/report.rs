//! Outcome records shared by all verification suites.

use std::time::{Duration, Instant};

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    ProbablePass,
    Fail,
}

impl Status {
    pub fn ok(self) -> bool {
        self != Status::Fail
    }
}

/// Result of one identity check. `residual` holds the first nonzero residual
/// (or a short witness reference) in text form.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Outcome {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure_bound: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub primes: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    /// Wall time, when the producer measured it.
    #[serde(skip)]
    pub elapsed: Option<Duration>,
}

impl Outcome {
    pub fn pass(name: impl Into<String>) -> Self {
        Self { name: name.into(), status: Status::Pass, residual: None, failure_bound: None, primes: Vec::new(), detail: None, elapsed: None }
    }

    pub fn fail(name: impl Into<String>, residual: impl Into<String>) -> Self {
        Self { residual: Some(residual.into()), status: Status::Fail, ..Self::pass(name) }
    }

    /// Pass if `residual` is `None`.
    pub fn from_residual(name: impl Into<String>, residual: Option<String>) -> Self {
        match residual {
            None => Self::pass(name),
            Some(r) => Self::fail(name, r),
        }
    }

    pub fn probable(name: impl Into<String>, primes: Vec<u64>, bound: f64) -> Self {
        Self { status: Status::ProbablePass, primes, failure_bound: Some(bound), ..Self::pass(name) }
    }

    pub fn with_detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }

    pub fn timed(mut self, start: Instant) -> Self {
        self.elapsed = Some(start.elapsed());
        self
    }

    pub fn ok(&self) -> bool {
        self.status.ok()
    }

    /// One outcome standing for `parts`: the worst status, the first failing
    /// residual, the largest failure bound and the union of the primes.
    pub fn merge(name: impl Into<String>, parts: &[Outcome]) -> Self {
        let mut out = Self::pass(name);
        for p in parts {
            match p.status {
                Status::Fail if out.status != Status::Fail => {
                    out.status = Status::Fail;
                    out.residual = Some(format!("{}: {}", p.name, p.residual.as_deref().unwrap_or("failed")));
                }
                Status::ProbablePass if out.status == Status::Pass => out.status = Status::ProbablePass,
                _ => {}
            }
            if let Some(b) = p.failure_bound {
                out.failure_bound = Some(out.failure_bound.map_or(b, |x: f64| x.max(b)));
            }
            for q in &p.primes {
                if !out.primes.contains(q) {
                    out.primes.push(*q);
                }
            }
            if let Some(e) = p.elapsed {
                out.elapsed = Some(out.elapsed.unwrap_or_default() + e);
            }
        }
        out.detail = match parts {
            [one] => one.detail.clone(),
            _ => Some(format!("{} sub-checks: {}", parts.len(), parts.iter().map(|p| p.name.as_str()).collect::<Vec<_>>().join("; "))),
        };
        out
    }
}
