//! Structured verification reports: suites record every violation instead of
//! aborting, so a full conformance summary can be printed in one run.

use std::fmt;

/// One failed check: where, what was expected, what was found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub location: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub suite: String,
    pub range: String,
    pub checked: u64,
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>, range: impl Into<String>) -> Self {
        VerificationReport {
            suite: suite.into(),
            range: range.into(),
            checked: 0,
            violations: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn check(&mut self, location: impl fmt::Display, expected: impl fmt::Display, actual: impl fmt::Display) {
        self.checked += 1;
        let e = expected.to_string();
        let a = actual.to_string();
        if e != a {
            self.violations.push(Violation { location: location.to_string(), expected: e, actual: a });
        }
    }

    pub fn check_eq<T: PartialEq + fmt::Display>(&mut self, location: impl fmt::Display, expected: &T, actual: &T) {
        self.checked += 1;
        if expected != actual {
            self.violations.push(Violation {
                location: location.to_string(),
                expected: expected.to_string(),
                actual: actual.to_string(),
            });
        }
    }

    pub fn merge(&mut self, other: VerificationReport) {
        self.checked += other.checked;
        self.violations.extend(other.violations);
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "suite": self.suite,
            "range": self.range,
            "checked": self.checked,
            "passed": self.passed(),
            "violations": self.violations.iter().map(|v| serde_json::json!({
                "location": v.location,
                "expected": v.expected,
                "actual": v.actual,
            })).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            write!(f, "{}: PASS ({} checks, {})", self.suite, self.checked, self.range)
        } else {
            writeln!(
                f,
                "{}: FAIL ({} of {} checks, {})",
                self.suite,
                self.violations.len(),
                self.checked,
                self.range
            )?;
            for v in &self.violations {
                writeln!(f, "  at {}: expected {}, got {}", v.location, v.expected, v.actual)?;
            }
            Ok(())
        }
    }
}
