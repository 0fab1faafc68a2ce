//! Verification reports: which diagrams were evaluated and, for each failing
//! one, the two evaluated paths.

use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::monoidal::Mor;

#[derive(Clone, Debug)]
pub struct Failure {
    pub diagram: String,
    pub left: Option<Mor>,
    pub right: Option<Mor>,
    /// Set when a path could not be evaluated at all.
    pub note: Option<String>,
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub checked: Vec<String>,
    pub failures: Vec<Failure>,
}

impl Report {
    pub fn new() -> Report {
        Report::default()
    }

    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn failure_names(&self) -> Vec<String> {
        self.failures.iter().map(|f| f.diagram.clone()).collect()
    }

    /// Records a commuting-diagram check between two evaluated paths.
    pub fn check_eq(&mut self, diagram: &str, left: Result<Mor>, right: Result<Mor>) -> bool {
        self.checked.push(diagram.to_string());
        match (left, right) {
            (Ok(l), Ok(r)) => {
                if l == r {
                    true
                } else {
                    self.failures.push(Failure {
                        diagram: diagram.to_string(),
                        left: Some(l),
                        right: Some(r),
                        note: None,
                    });
                    false
                }
            }
            (l, r) => {
                let note = [l.as_ref().err(), r.as_ref().err()]
                    .into_iter()
                    .flatten()
                    .map(|e| e.to_string())
                    .collect::<Vec<_>>()
                    .join("; ");
                self.failures.push(Failure {
                    diagram: diagram.to_string(),
                    left: l.ok(),
                    right: r.ok(),
                    note: Some(note),
                });
                false
            }
        }
    }

    /// Records a condition that is not a pair of paths.
    pub fn check(&mut self, diagram: &str, ok: bool, note: impl FnOnce() -> String) -> bool {
        self.checked.push(diagram.to_string());
        if !ok {
            self.failures.push(Failure { diagram: diagram.to_string(), left: None, right: None, note: Some(note()) });
        }
        ok
    }

    /// Records a construction step; an error becomes a named failure.
    pub fn attempt<T>(&mut self, diagram: &str, step: Result<T>) -> Option<T> {
        self.checked.push(diagram.to_string());
        match step {
            Ok(v) => Some(v),
            Err(e) => {
                let (left, right) = match &e {
                    Error::Check(inner) => {
                        // Surface the inner failures under this name as well.
                        for f in &inner.failures {
                            self.failures.push(Failure {
                                diagram: format!("{diagram}/{}", f.diagram),
                                ..f.clone()
                            });
                        }
                        (None, None)
                    }
                    _ => (None, None),
                };
                self.failures.push(Failure { diagram: diagram.to_string(), left, right, note: Some(e.to_string()) });
                None
            }
        }
    }

    /// Appends another report with every diagram name prefixed.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        let name = |d: &str| if prefix.is_empty() { d.to_string() } else { format!("{prefix}/{d}") };
        self.checked.extend(other.checked.iter().map(|d| name(d)));
        self.failures.extend(other.failures.into_iter().map(|f| Failure { diagram: name(&f.diagram), ..f }));
    }

    pub fn into_result(self) -> Result<()> {
        if self.pass() {
            Ok(())
        } else {
            Err(Error::Check(Box::new(self)))
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "pass": self.pass(),
            "checked": self.checked.len(),
            "failures": self.failures.iter().map(|f| json!({
                "diagram": f.diagram,
                "left": f.left.as_ref().map(Mor::to_json),
                "right": f.right.as_ref().map(Mor::to_json),
                "note": f.note,
            })).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} ({} diagrams, {} failures)",
            if self.pass() { "PASS" } else { "FAIL" },
            self.checked.len(),
            self.failures.len()
        )?;
        for fail in &self.failures {
            writeln!(f, "  FAIL {}", fail.diagram)?;
            if let Some(l) = &fail.left {
                writeln!(f, "    left:  {l}")?;
            }
            if let Some(r) = &fail.right {
                writeln!(f, "    right: {r}")?;
            }
            if let Some(n) = &fail.note {
                writeln!(f, "    note:  {n}")?;
            }
        }
        Ok(())
    }
}
