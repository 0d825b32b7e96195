//! Verdicts, case results and the consolidated report.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    /// The computed result differs from the printed one and agrees with an
    /// independent derivation; listed in the ledger, never a failure.
    MismatchRecorded,
    Unsupported,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::MismatchRecorded => "mismatch-recorded",
            Verdict::Unsupported => "unsupported",
        })
    }
}

/// A printed form set against the derived one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LedgerEntry {
    pub label: String,
    pub printed: String,
    pub derived: String,
    pub residual: String,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseResult {
    pub label: String,
    pub topic: String,
    pub kind: String,
    pub verdict: Verdict,
    pub summary: String,
    pub details: BTreeMap<String, String>,
    #[serde(skip)]
    pub ledger: Option<LedgerEntry>,
}

impl CaseResult {
    pub fn new(label: &str, topic: &str, kind: &str) -> Self {
        CaseResult {
            label: label.to_string(),
            topic: topic.to_string(),
            kind: kind.to_string(),
            verdict: Verdict::Fail,
            summary: String::new(),
            details: BTreeMap::new(),
            ledger: None,
        }
    }

    pub fn detail(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.details.insert(key.to_string(), value.to_string());
        self
    }

    pub fn verdict(mut self, v: Verdict, summary: impl Into<String>) -> Self {
        self.verdict = v;
        self.summary = summary.into();
        self
    }

    pub fn record(
        mut self,
        printed: impl fmt::Display,
        derived: impl fmt::Display,
        residual: impl fmt::Display,
        note: &str,
    ) -> Self {
        self.ledger = Some(LedgerEntry {
            label: self.label.clone(),
            printed: printed.to_string(),
            derived: derived.to_string(),
            residual: residual.to_string(),
            note: note.to_string(),
        });
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub mismatch_recorded: usize,
    pub unsupported: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub summary: Summary,
    pub cases: Vec<CaseResult>,
    pub ledger: Vec<LedgerEntry>,
}

impl Report {
    /// Collects results sorted by label, so concurrent runs merge to the
    /// same document.
    pub fn new(command: &str, mut cases: Vec<CaseResult>) -> Self {
        cases.sort_by(|a, b| a.label.cmp(&b.label));
        let mut summary = Summary {
            total: cases.len(),
            ..Summary::default()
        };
        for c in &cases {
            match c.verdict {
                Verdict::Pass => summary.pass += 1,
                Verdict::Fail => summary.fail += 1,
                Verdict::MismatchRecorded => summary.mismatch_recorded += 1,
                Verdict::Unsupported => summary.unsupported += 1,
            }
        }
        let ledger = cases.iter().filter_map(|c| c.ledger.clone()).collect();
        Report {
            tool: "liesym".to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            summary,
            cases,
            ledger,
        }
    }

    /// 0 when nothing failed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        i32::from(self.summary.fail > 0)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.cases {
            out.push_str(&format!("{:<17} {}  {}\n", c.verdict.to_string(), c.label, c.summary));
            for (k, v) in &c.details {
                out.push_str(&format!("{:<17}   {k}: {v}\n", ""));
            }
        }
        if !self.ledger.is_empty() {
            out.push_str("\nledger:\n");
            for e in &self.ledger {
                out.push_str(&format!(
                    "  {}\n    printed:  {}\n    derived:  {}\n",
                    e.label, e.printed, e.derived
                ));
                if !e.residual.is_empty() {
                    out.push_str(&format!("    residual: {}\n", e.residual));
                }
                out.push_str(&format!("    note:     {}\n", e.note));
            }
        }
        let s = &self.summary;
        out.push_str(&format!(
            "\n{} cases: {} pass, {} fail, {} mismatch-recorded, {} unsupported\n",
            s.total, s.pass, s.fail, s.mismatch_recorded, s.unsupported
        ));
        out
    }
}
