//! Machine-readable verification reports: one record per check, a stable
//! line-oriented encoding, and summary counts that must match the records.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Outcome {
    Pass,
    Fail,
    Inconclusive,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub outcome: Outcome,
    /// Reproducible witness (required for fail/inconclusive records).
    pub witness: Option<String>,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub input_digest: String,
    pub parameters: BTreeMap<String, String>,
    pub seed: Option<u64>,
    pub records: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>, input_echo: &str) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(input_echo.as_bytes());
        let digest = hex_string(&hasher.finalize());
        VerificationReport {
            suite: suite.into(),
            input_digest: digest,
            parameters: BTreeMap::new(),
            seed: None,
            records: Vec::new(),
        }
    }

    pub fn set_param(&mut self, key: &str, value: impl ToString) {
        self.parameters.insert(key.into(), value.to_string());
    }

    pub fn pass(&mut self, id: impl Into<String>) {
        self.records.push(CheckRecord {
            id: id.into(),
            outcome: Outcome::Pass,
            witness: None,
            detail: None,
        });
    }

    pub fn pass_detail(&mut self, id: impl Into<String>, detail: impl Into<String>) {
        self.records.push(CheckRecord {
            id: id.into(),
            outcome: Outcome::Pass,
            witness: None,
            detail: Some(detail.into()),
        });
    }

    pub fn fail(&mut self, id: impl Into<String>, witness: impl Into<String>) {
        self.records.push(CheckRecord {
            id: id.into(),
            outcome: Outcome::Fail,
            witness: Some(witness.into()),
            detail: None,
        });
    }

    pub fn inconclusive(&mut self, id: impl Into<String>, witness: impl Into<String>) {
        self.records.push(CheckRecord {
            id: id.into(),
            outcome: Outcome::Inconclusive,
            witness: Some(witness.into()),
            detail: None,
        });
    }

    pub fn merge(&mut self, other: VerificationReport) {
        self.records.extend(other.records);
    }

    pub fn counts(&self) -> (usize, usize, usize) {
        let mut c = (0, 0, 0);
        for r in &self.records {
            match r.outcome {
                Outcome::Pass => c.0 += 1,
                Outcome::Fail => c.1 += 1,
                Outcome::Inconclusive => c.2 += 1,
            }
        }
        c
    }

    pub fn all_passed(&self) -> bool {
        let (_, fail, inconclusive) = self.counts();
        fail == 0 && inconclusive == 0
    }

    pub fn any_failed(&self) -> bool {
        self.counts().1 > 0
    }

    /// Stable line-oriented encoding; byte-reproducible for equal inputs.
    pub fn to_lines(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "suite {}", self.suite);
        let _ = writeln!(s, "input {}", self.input_digest);
        for (k, v) in &self.parameters {
            let _ = writeln!(s, "param {k}={v}");
        }
        if let Some(seed) = self.seed {
            let _ = writeln!(s, "seed {seed}");
        }
        for r in &self.records {
            let mut line = format!("check {} {}", r.id, r.outcome.as_str());
            if let Some(w) = &r.witness {
                let _ = write!(line, " witness={w}");
            }
            if let Some(d) = &r.detail {
                let _ = write!(line, " detail={d}");
            }
            let _ = writeln!(s, "{line}");
        }
        let (p, f, i) = self.counts();
        let _ = writeln!(s, "summary pass={p} fail={f} inconclusive={i}");
        s
    }

    /// One-line human digest.
    pub fn summary_line(&self) -> String {
        let (p, f, i) = self.counts();
        format!(
            "{}: {} checks, {} pass, {} fail, {} inconclusive",
            self.suite,
            p + f + i,
            p,
            f,
            i
        )
    }
}

fn hex_string(bytes: &[u8]) -> String {
    let mut s = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        let _ = write!(s, "{b:02x}");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_records() {
        let mut r = VerificationReport::new("demo", "input");
        r.pass("a");
        r.fail("b", "w=1");
        r.inconclusive("c", "w=2");
        assert_eq!(r.counts(), (1, 1, 1));
        assert!(!r.all_passed());
        assert!(r.any_failed());
        let text = r.to_lines();
        assert!(text.contains("check b fail witness=w=1"));
        assert!(text.ends_with("summary pass=1 fail=1 inconclusive=1\n"));
    }

    #[test]
    fn reports_are_byte_reproducible() {
        let build = || {
            let mut r = VerificationReport::new("demo", "same-input");
            r.set_param("d", 6);
            r.pass("x");
            r.to_lines()
        };
        assert_eq!(build(), build());
    }
}
