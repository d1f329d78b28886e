//! Verification reports and their text / machine renderings.

use std::fmt;
use std::time::Instant;

use serde::Serialize;

use crate::series::Multidegree;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Error,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Error => "error",
        })
    }
}

/// Where a check failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Location {
    Multidegree(Multidegree),
    /// A multidegree within one of several identities, e.g. `left[2]`.
    Labeled(String, Multidegree),
    /// An axiom on a generator (or a product of generators), optionally
    /// narrowed to a series multidegree.
    Generator {
        name: String,
        axiom: String,
        at: Option<Multidegree>,
    },
    ChainIndex {
        condition: String,
        index: usize,
    },
    Named(String),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Multidegree(md) => write!(f, "{md}"),
            Location::Labeled(label, md) => write!(f, "{label}{md}"),
            Location::Generator { name, axiom, at } => {
                write!(f, "{name}/{axiom}")?;
                if let Some(md) = at {
                    write!(f, "{md}")?;
                }
                Ok(())
            }
            Location::ChainIndex { condition, index } => write!(f, "{condition}#{index}"),
            Location::Named(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub location: Location,
    pub residual: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub subject: String,
    pub check: String,
    pub verdict: Verdict,
    pub cutoff: Option<u32>,
    pub failures: Vec<Failure>,
    pub timing_ms: u64,
    /// Advisory remarks, rendered in text output only.
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn new(subject: impl Into<String>, check: impl Into<String>, cutoff: Option<u32>) -> Self {
        VerificationReport {
            subject: subject.into(),
            check: check.into(),
            verdict: Verdict::Pass,
            cutoff,
            failures: Vec::new(),
            timing_ms: 0,
            notes: Vec::new(),
        }
    }

    pub fn error(
        subject: impl Into<String>,
        check: impl Into<String>,
        cutoff: Option<u32>,
        message: impl fmt::Display,
    ) -> Self {
        let mut r = Self::new(subject, check, cutoff);
        r.verdict = Verdict::Error;
        r.failures.push(Failure {
            location: Location::Named("error".into()),
            residual: message.to_string(),
        });
        r
    }

    pub fn push(&mut self, location: Location, residual: impl Into<String>) {
        self.failures.push(Failure {
            location,
            residual: residual.into(),
        });
        if self.verdict == Verdict::Pass {
            self.verdict = Verdict::Fail;
        }
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn first_failure(&self) -> Option<&Failure> {
        self.failures.first()
    }

    pub fn timed(mut self, started: Instant) -> Self {
        self.timing_ms = started.elapsed().as_millis() as u64;
        self
    }

    /// Merges another report's failures (keeping this report's identity).
    pub fn absorb(&mut self, other: VerificationReport) {
        if other.verdict == Verdict::Error {
            self.verdict = Verdict::Error;
        }
        for f in other.failures {
            self.push(f.location, f.residual);
        }
        self.notes.extend(other.notes);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Machine,
}

#[derive(Serialize)]
struct MachineFailure<'a> {
    location: String,
    residual: &'a str,
}

#[derive(Serialize)]
struct MachineReport<'a> {
    subject: &'a str,
    check: &'a str,
    verdict: Verdict,
    cutoff: Option<u32>,
    failures: Vec<MachineFailure<'a>>,
    timing_ms: u64,
}

/// Renders a report. Machine output is one JSON object on one line with a
/// fixed key order; text output is one header line plus one line per
/// failure. `color` adds ANSI styling to the text verdict.
pub fn emit_report(r: &VerificationReport, format: ReportFormat, color: bool) -> String {
    match format {
        ReportFormat::Machine => {
            let m = MachineReport {
                subject: &r.subject,
                check: &r.check,
                verdict: r.verdict,
                cutoff: r.cutoff,
                failures: r
                    .failures
                    .iter()
                    .map(|f| MachineFailure {
                        location: f.location.to_string(),
                        residual: &f.residual,
                    })
                    .collect(),
                timing_ms: r.timing_ms,
            };
            let mut s = serde_json::to_string(&m).expect("report serialization cannot fail");
            s.push('\n');
            s
        }
        ReportFormat::Text => {
            let tag = match (r.verdict, color) {
                (Verdict::Pass, true) => "\x1b[32mPASS\x1b[0m",
                (Verdict::Fail, true) => "\x1b[31mFAIL\x1b[0m",
                (Verdict::Error, true) => "\x1b[33mERROR\x1b[0m",
                (Verdict::Pass, false) => "PASS",
                (Verdict::Fail, false) => "FAIL",
                (Verdict::Error, false) => "ERROR",
            };
            let cutoff = r.cutoff.map(|c| format!("cutoff {c}, ")).unwrap_or_default();
            let mut s = format!("[{tag}] {} {} ({cutoff}{} ms)\n", r.subject, r.check, r.timing_ms);
            for f in &r.failures {
                s.push_str(&format!("  at {}: {}\n", f.location, f.residual));
            }
            for n in &r.notes {
                s.push_str(&format!("  note: {n}\n"));
            }
            s
        }
    }
}
