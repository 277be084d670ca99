//! Check reports and the JSON report document.
//!
//! Reports are deterministic for a fixed seed: checks are sorted by id and
//! shape before serialization, and `elapsed_ms` is the only field allowed to
//! vary between identical invocations. The document layout is published in
//! `docs/report-schema.json`; [`validate_report_json`] is the executable
//! form of that schema.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

/// Result of one check on one shape. Witnesses are counterexample renderings
/// and are nonempty exactly on failure; notes carry informative details that
/// may accompany any status.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckReport {
    pub id: String,
    pub shape: (usize, usize),
    pub status: CheckStatus,
    pub witnesses: Vec<String>,
    pub notes: Vec<String>,
    pub reason: Option<String>,
    pub elapsed_ms: u64,
}

impl CheckReport {
    pub fn is_fail(&self) -> bool {
        self.status == CheckStatus::Fail
    }
}

/// The full report document written by `check` and `check-all`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReportDocument {
    pub version: u32,
    pub seed: u64,
    pub mutation: bool,
    pub shapes: Vec<(usize, usize)>,
    pub summary: Summary,
    pub checks: Vec<CheckReport>,
}

#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

impl ReportDocument {
    pub fn new(
        seed: u64,
        mutation: bool,
        shapes: Vec<(usize, usize)>,
        mut checks: Vec<CheckReport>,
    ) -> Self {
        checks.sort_by(|a, b| (a.id.as_str(), a.shape).cmp(&(b.id.as_str(), b.shape)));
        let mut summary = Summary::default();
        for c in &checks {
            match c.status {
                CheckStatus::Pass => summary.pass += 1,
                CheckStatus::Fail => summary.fail += 1,
                CheckStatus::Skipped => summary.skipped += 1,
            }
        }
        ReportDocument {
            version: 1,
            seed,
            mutation,
            shapes,
            summary,
            checks,
        }
    }

    pub fn has_failures(&self) -> bool {
        self.summary.fail > 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Copy with all elapsed fields zeroed; two runs with the same seed must
    /// produce byte-identical JSON after this normalization.
    pub fn with_zeroed_elapsed(&self) -> Self {
        let mut out = self.clone();
        for c in &mut out.checks {
            c.elapsed_ms = 0;
        }
        out
    }
}

/// Validate a JSON value against the published report schema. Returns the
/// first violation found.
pub fn validate_report_json(v: &serde_json::Value) -> Result<(), String> {
    let obj = v.as_object().ok_or("report must be an object")?;
    for key in ["version", "seed", "mutation", "shapes", "summary", "checks"] {
        if !obj.contains_key(key) {
            return Err(format!("missing key '{key}'"));
        }
    }
    if !obj["version"].is_u64() {
        return Err("'version' must be an unsigned integer".into());
    }
    if !obj["seed"].is_u64() {
        return Err("'seed' must be an unsigned integer".into());
    }
    if !obj["mutation"].is_boolean() {
        return Err("'mutation' must be a boolean".into());
    }
    let shapes = obj["shapes"]
        .as_array()
        .ok_or("'shapes' must be an array")?;
    for s in shapes {
        validate_shape(s)?;
    }
    let summary = obj["summary"]
        .as_object()
        .ok_or("'summary' must be an object")?;
    for key in ["pass", "fail", "skipped"] {
        if !summary.get(key).map(|x| x.is_u64()).unwrap_or(false) {
            return Err(format!("summary.{key} must be an unsigned integer"));
        }
    }
    let checks = obj["checks"]
        .as_array()
        .ok_or("'checks' must be an array")?;
    let mut prev: Option<(String, (u64, u64))> = None;
    for c in checks {
        let c = c.as_object().ok_or("each check must be an object")?;
        for key in [
            "id",
            "shape",
            "status",
            "witnesses",
            "notes",
            "reason",
            "elapsed_ms",
        ] {
            if !c.contains_key(key) {
                return Err(format!("check missing key '{key}'"));
            }
        }
        let id = c["id"].as_str().ok_or("check id must be a string")?;
        validate_shape(&c["shape"])?;
        let status = c["status"].as_str().ok_or("status must be a string")?;
        if !matches!(status, "pass" | "fail" | "skipped") {
            return Err(format!("invalid status '{status}'"));
        }
        let witnesses = c["witnesses"]
            .as_array()
            .ok_or("witnesses must be an array")?;
        if !witnesses.iter().all(|w| w.is_string()) {
            return Err("witnesses must be strings".into());
        }
        if status == "fail" && witnesses.is_empty() {
            return Err(format!("failed check '{id}' must carry witnesses"));
        }
        if status != "fail" && !witnesses.is_empty() {
            return Err(format!("non-failing check '{id}' must not carry witnesses"));
        }
        if status == "skipped" && c["reason"].is_null() {
            return Err(format!("skipped check '{id}' must carry a reason"));
        }
        if !c["notes"]
            .as_array()
            .map(|a| a.iter().all(|x| x.is_string()))
            .unwrap_or(false)
        {
            return Err("notes must be an array of strings".into());
        }
        if !(c["reason"].is_null() || c["reason"].is_string()) {
            return Err("reason must be null or a string".into());
        }
        if !c["elapsed_ms"].is_u64() {
            return Err("elapsed_ms must be an unsigned integer".into());
        }
        let shape = (
            c["shape"][0].as_u64().unwrap(),
            c["shape"][1].as_u64().unwrap(),
        );
        let key = (id.to_string(), shape);
        if let Some(p) = &prev {
            if *p > key {
                return Err("checks must be sorted by (id, shape)".into());
            }
        }
        prev = Some(key);
    }
    Ok(())
}

fn validate_shape(v: &serde_json::Value) -> Result<(), String> {
    let arr = v.as_array().ok_or("shape must be a two-element array")?;
    if arr.len() != 2 || !arr.iter().all(|x| x.is_u64()) {
        return Err("shape must be two unsigned integers".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ReportDocument {
        ReportDocument::new(
            7,
            false,
            vec![(2, 4)],
            vec![
                CheckReport {
                    id: "dq-central".into(),
                    shape: (2, 2),
                    status: CheckStatus::Pass,
                    witnesses: vec![],
                    notes: vec!["4 generators checked".into()],
                    reason: None,
                    elapsed_ms: 3,
                },
                CheckReport {
                    id: "diagram-tau".into(),
                    shape: (2, 5),
                    status: CheckStatus::Skipped,
                    witnesses: vec![],
                    notes: vec![],
                    reason: Some("requires 2k = n".into()),
                    elapsed_ms: 0,
                },
            ],
        )
    }

    #[test]
    fn document_validates_against_schema() {
        let doc = sample();
        let v: serde_json::Value = serde_json::from_str(&doc.to_json()).unwrap();
        validate_report_json(&v).unwrap();
    }

    #[test]
    fn schema_rejects_malformed_documents() {
        let doc = sample();
        let mut v: serde_json::Value = serde_json::from_str(&doc.to_json()).unwrap();
        v["checks"][0]["status"] = serde_json::json!("fail");
        // A failing check without witnesses violates the invariant.
        assert!(validate_report_json(&v).is_err());
        let mut v2: serde_json::Value = serde_json::from_str(&sample().to_json()).unwrap();
        v2.as_object_mut().unwrap().remove("seed");
        assert!(validate_report_json(&v2).is_err());
    }

    #[test]
    fn checks_are_sorted_and_summarized() {
        let doc = sample();
        assert_eq!(doc.summary.pass, 1);
        assert_eq!(doc.summary.skipped, 1);
        assert!(doc.checks[0].id <= doc.checks[1].id);
    }
}
