//! Verification report: one entry per claim, persisted as a structured
//! text summary next to the CSV evidence, re-renderable as a table.

use crate::{CliError, Result};
use std::fmt;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    /// The evidence is refinement stability, not a verified constant.
    BoundedSurrogate,
    Fail,
    /// A dependency suite aborted before this claim could run.
    Skipped,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::BoundedSurrogate => "bounded-surrogate",
            Verdict::Fail => "fail",
            Verdict::Skipped => "skipped",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "pass" => Some(Verdict::Pass),
            "bounded-surrogate" => Some(Verdict::BoundedSurrogate),
            "fail" => Some(Verdict::Fail),
            "skipped" => Some(Verdict::Skipped),
            _ => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_str())
    }
}

#[derive(Debug, Clone)]
pub struct ClaimEntry {
    pub id: String,
    /// The quantitative statement being checked, in formula form.
    pub anchor: String,
    pub verdict: Verdict,
    pub evidence: Vec<String>,
    pub runtime_ms: u128,
    pub details: Vec<String>,
}

#[derive(Debug, Clone, Default)]
pub struct VerificationReport {
    pub header: Vec<(String, String)>,
    pub claims: Vec<ClaimEntry>,
}

impl VerificationReport {
    pub fn any_fail(&self) -> bool {
        self.claims.iter().any(|c| c.verdict == Verdict::Fail)
    }

    pub fn write_summary(&self, path: &Path) -> Result<()> {
        let mut text = String::from("# radop verification summary\n");
        for (k, v) in &self.header {
            text.push_str(&format!("{k} = {v}\n"));
        }
        for claim in &self.claims {
            text.push_str(&format!("\n[claim.{}]\n", claim.id));
            text.push_str(&format!("anchor = {}\n", claim.anchor));
            text.push_str(&format!("verdict = {}\n", claim.verdict.as_str()));
            text.push_str(&format!("evidence = {}\n", claim.evidence.join(", ")));
            text.push_str(&format!("runtime_ms = {}\n", claim.runtime_ms));
            for d in &claim.details {
                text.push_str(&format!("detail = {d}\n"));
            }
        }
        std::fs::write(path, text).map_err(CliError::io(path))
    }

    pub fn parse_summary(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
        let mut report = VerificationReport::default();
        let mut current: Option<ClaimEntry> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("[claim.") {
                let id = rest.strip_suffix(']').ok_or_else(|| {
                    CliError::Bundle(format!("malformed section header on line {}", lineno + 1))
                })?;
                if let Some(entry) = current.take() {
                    report.claims.push(entry);
                }
                current = Some(ClaimEntry {
                    id: id.to_string(),
                    anchor: String::new(),
                    verdict: Verdict::Fail,
                    evidence: Vec::new(),
                    runtime_ms: 0,
                    details: Vec::new(),
                });
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Bundle(format!("expected key = value on line {}", lineno + 1))
            })?;
            let (key, value) = (key.trim(), value.trim());
            match current.as_mut() {
                None => report.header.push((key.to_string(), value.to_string())),
                Some(entry) => match key {
                    "anchor" => entry.anchor = value.to_string(),
                    "verdict" => {
                        entry.verdict = Verdict::parse(value).ok_or_else(|| {
                            CliError::Bundle(format!("unknown verdict `{value}`"))
                        })?;
                    }
                    "evidence" => {
                        entry.evidence =
                            value.split(',').map(|s| s.trim().to_string()).collect();
                    }
                    "runtime_ms" => {
                        entry.runtime_ms = value.parse().map_err(|_| {
                            CliError::Bundle(format!("bad runtime_ms `{value}`"))
                        })?;
                    }
                    "detail" => entry.details.push(value.to_string()),
                    other => {
                        return Err(CliError::Bundle(format!("unknown claim key `{other}`")))
                    }
                },
            }
        }
        if let Some(entry) = current.take() {
            report.claims.push(entry);
        }
        for claim in &report.claims {
            let dups = report.claims.iter().filter(|c| c.id == claim.id).count();
            if dups != 1 {
                return Err(CliError::Bundle(format!("claim `{}` appears {dups} times", claim.id)));
            }
        }
        Ok(report)
    }

    /// Human-readable table.
    pub fn render(&self) -> String {
        if self.claims.is_empty() {
            return "no claims\n".to_string();
        }
        let id_w = self.claims.iter().map(|c| c.id.len()).max().unwrap().max(5);
        let verdict_w = 17;
        let mut out = String::new();
        for (k, v) in &self.header {
            out.push_str(&format!("{k}: {v}\n"));
        }
        out.push_str(&format!(
            "{:<id_w$}  {:<verdict_w$}  {}\n",
            "claim", "verdict", "anchor / key numbers"
        ));
        out.push_str(&format!("{}\n", "-".repeat(id_w + verdict_w + 30)));
        for c in &self.claims {
            out.push_str(&format!(
                "{:<id_w$}  {:<verdict_w$}  {}\n",
                c.id,
                c.verdict.as_str(),
                c.anchor
            ));
            for d in &c.details {
                out.push_str(&format!("{:<id_w$}  {:<verdict_w$}  - {}\n", "", "", d));
            }
        }
        let fails = self.claims.iter().filter(|c| c.verdict == Verdict::Fail).count();
        let skipped = self.claims.iter().filter(|c| c.verdict == Verdict::Skipped).count();
        out.push_str(&format!(
            "\n{} claims, {} failed, {} skipped\n",
            self.claims.len(),
            fails,
            skipped
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> VerificationReport {
        VerificationReport {
            header: vec![("seed".into(), "42".into())],
            claims: vec![
                ClaimEntry {
                    id: "lyapunov".into(),
                    anchor: "A phi <= C phi".into(),
                    verdict: Verdict::Pass,
                    evidence: vec!["lyapunov.csv".into()],
                    runtime_ms: 12,
                    details: vec!["max slack 1e-12".into()],
                },
                ClaimEntry {
                    id: "green".into(),
                    anchor: "G <= C_k (1+m r)^-k r^(2-N)".into(),
                    verdict: Verdict::BoundedSurrogate,
                    evidence: vec!["green_profile.csv".into(), "green_bound.csv".into()],
                    runtime_ms: 345,
                    details: vec![],
                },
            ],
        }
    }

    #[test]
    fn summary_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("summary.txt");
        let report = sample();
        report.write_summary(&path).unwrap();
        let parsed = VerificationReport::parse_summary(&path).unwrap();
        assert_eq!(parsed.claims.len(), 2);
        assert_eq!(parsed.claims[0].id, "lyapunov");
        assert_eq!(parsed.claims[0].verdict, Verdict::Pass);
        assert_eq!(parsed.claims[1].evidence.len(), 2);
        assert_eq!(parsed.header[0].0, "seed");
        assert!(!parsed.any_fail());
    }

    #[test]
    fn renders_empty_bundle() {
        let report = VerificationReport::default();
        assert_eq!(report.render(), "no claims\n");
    }

    #[test]
    fn duplicate_claims_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("summary.txt");
        let mut report = sample();
        let mut dup = report.claims[0].clone();
        dup.details.clear();
        report.claims.push(dup);
        report.write_summary(&path).unwrap();
        assert!(VerificationReport::parse_summary(&path).is_err());
    }

    #[test]
    fn corrupt_summary_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("summary.txt");
        std::fs::write(&path, "[claim.x]\nnot a key value line\n").unwrap();
        assert!(VerificationReport::parse_summary(&path).is_err());
        assert!(VerificationReport::parse_summary(&dir.path().join("missing.txt")).is_err());
    }
}
