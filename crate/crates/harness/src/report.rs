//! Audit report wire format (ffr-1). Reports are byte-reproducible under a
//! fixed (seed, corpus) apart from the `timing` field, which comparisons
//! must exclude.

use serde::{Deserialize, Serialize};

use crate::verify::VerifierVerdict;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AuditReport {
    pub format: String,
    pub theorem: String,
    pub corpus: CorpusDescriptor,
    pub rows: Vec<AuditRow>,
    pub summary: Summary,
    /// Start timestamp and wall time; excluded from byte comparisons.
    pub timing: Timing,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorpusDescriptor {
    pub name: String,
    pub seed: u64,
    pub instances: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AuditRow {
    pub instance: String,
    pub hypotheses_ok: bool,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub hypothesis_notes: Vec<String>,
    /// constructed | precondition-unmet | hypothesis-unmet | finding
    pub outcome: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verifier: Option<VerifierVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub finding: Option<Finding>,
    /// Edge ids of the constructed factor, sorted.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factor: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

/// A persisted, re-checkable deviation: either a theorem-guaranteed
/// construction that failed, or a recorded bound status.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Finding {
    pub kind: String,
    pub detail: String,
    pub witness: serde_json::Value,
    /// Command that reproduces the row.
    pub repro: String,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Summary {
    pub instances: usize,
    pub constructed: usize,
    pub passed: usize,
    pub findings: usize,
    pub preconditions_unmet: usize,
    pub hypothesis_unmet: usize,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Timing {
    pub started_unix_ms: u128,
    pub wall_ms: u128,
}

impl AuditReport {
    pub fn assemble(theorem: &str, corpus_name: &str, seed: u64, mut rows: Vec<AuditRow>) -> Self {
        rows.sort_by(|a, b| a.instance.cmp(&b.instance));
        let mut summary = Summary {
            instances: rows.len(),
            ..Default::default()
        };
        for row in &rows {
            match row.outcome.as_str() {
                "constructed" => {
                    summary.constructed += 1;
                    if row.verifier.as_ref().map_or(false, |v| v.pass) {
                        summary.passed += 1;
                    }
                }
                "precondition-unmet" => summary.preconditions_unmet += 1,
                "hypothesis-unmet" => summary.hypothesis_unmet += 1,
                "finding" => summary.findings += 1,
                _ => {}
            }
        }
        AuditReport {
            format: "ffr-1".into(),
            theorem: theorem.into(),
            corpus: CorpusDescriptor {
                name: corpus_name.into(),
                seed,
                instances: rows.len(),
            },
            rows,
            summary,
            timing: Timing::default(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    /// Serialization with the timing field zeroed, for reproducibility
    /// comparisons.
    pub fn comparable_json(&self) -> String {
        let mut copy = self.clone();
        copy.timing = Timing::default();
        serde_json::to_string_pretty(&copy).expect("report serialization")
    }

    /// Every constructed row verified, nothing unexpected.
    pub fn all_pass(&self) -> bool {
        self.summary.findings == 0
            && self.summary.preconditions_unmet == 0
            && self.summary.constructed == self.summary.passed
            && self.summary.constructed == self.summary.instances
    }
}
