//! Suite orchestration: run the requested suites in dependency order,
//! collect claim entries, persist the summary.

mod green;
mod lyapunov;
mod mfunction;
mod rholder;
mod sector;
mod semigroup;
mod spectrum;
mod weighted;

use crate::config::{ExperimentConfig, Suite, Tolerances};
use crate::report::{ClaimEntry, Verdict, VerificationReport};
use crate::{CliError, Result};
use radop::OperatorParams;
use std::path::{Path, PathBuf};
use std::time::Instant;

pub struct SuiteContext<'a> {
    pub config: &'a ExperimentConfig,
    pub params: OperatorParams,
    pub tol: Tolerances,
    pub out: PathBuf,
}

impl SuiteContext<'_> {
    pub fn csv_path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }
}

/// Outcome of one suite: its claims plus the data handed to dependents.
struct SuiteOutcome {
    claims: Vec<ClaimEntry>,
    aborted: bool,
}

fn run_suite(suite: Suite, ctx: &SuiteContext<'_>) -> Result<Vec<ClaimEntry>> {
    match suite {
        Suite::Lyapunov => lyapunov::run(ctx),
        Suite::MFunction => mfunction::run(ctx),
        Suite::RHolder => rholder::run(ctx),
        Suite::Spectrum => spectrum::run(ctx),
        Suite::Semigroup => semigroup::run(ctx),
        Suite::Green => green::run(ctx),
        Suite::Weighted => weighted::run(ctx),
        Suite::Sector => sector::run(ctx),
    }
}

fn claims_of(suite: Suite) -> Vec<(&'static str, &'static str)> {
    match suite {
        Suite::Lyapunov => vec![("lyapunov", lyapunov::ANCHOR)],
        Suite::MFunction => {
            vec![("m-exponent", mfunction::ANCHOR_EXPONENT), ("m-oracle", mfunction::ANCHOR_ORACLE)]
        }
        Suite::RHolder => vec![("rholder", rholder::ANCHOR)],
        Suite::Spectrum => {
            vec![("spectrum", spectrum::ANCHOR_SPECTRUM), ("convergence", spectrum::ANCHOR_CONVERGENCE)]
        }
        Suite::Semigroup => vec![
            ("positivity-domination", semigroup::ANCHOR_DOMINATION),
            ("c0-probe", semigroup::ANCHOR_C0),
            ("ultracontractivity", semigroup::ANCHOR_KERNEL),
        ],
        Suite::Green => vec![("green", green::ANCHOR)],
        Suite::Weighted => vec![("weighted", weighted::ANCHOR)],
        Suite::Sector => vec![("sector", sector::ANCHOR)],
    }
}

fn skipped_claims(suite: Suite, reason: &str) -> Vec<ClaimEntry> {
    claims_of(suite)
        .into_iter()
        .map(|(id, anchor)| ClaimEntry {
            id: id.to_string(),
            anchor: anchor.to_string(),
            verdict: Verdict::Skipped,
            evidence: vec![],
            runtime_ms: 0,
            details: vec![format!("skipped: {reason}")],
        })
        .collect()
}

fn failed_claims(suite: Suite, error: &CliError) -> Vec<ClaimEntry> {
    claims_of(suite)
        .into_iter()
        .map(|(id, anchor)| ClaimEntry {
            id: id.to_string(),
            anchor: anchor.to_string(),
            verdict: Verdict::Fail,
            evidence: vec![],
            runtime_ms: 0,
            details: vec![format!("suite aborted: {error}")],
        })
        .collect()
}

/// Execute every requested suite and assemble the verification report.
/// Deterministic for a fixed (config, seed): all sampling is seeded and
/// all collection orders are fixed.
pub fn run_config(config: &ExperimentConfig) -> Result<VerificationReport> {
    let params = config.operator_params()?;
    let tol = config.tolerances()?;
    let out = config.run.output_dir.clone();
    std::fs::create_dir_all(&out).map_err(CliError::io(&out))?;

    let ctx = SuiteContext { config, params, tol, out };
    let suites = config.resolved_suites()?;

    let mut report = VerificationReport {
        header: vec![
            (
                "params".to_string(),
                format!(
                    "N={} alpha={} beta={} p={}",
                    config.params.dim, config.params.alpha, config.params.beta, config.params.p
                ),
            ),
            (
                "grid".to_string(),
                format!(
                    "radius={} n={} grading={}",
                    config.grid.radius, config.grid.n, config.grid.grading
                ),
            ),
            ("seed".to_string(), config.run.seed.to_string()),
        ],
        claims: Vec::new(),
    };

    let mut spectrum_aborted: Option<String> = None;
    for suite in suites {
        if suite.depends_on_spectrum() {
            if let Some(reason) = &spectrum_aborted {
                report.claims.extend(skipped_claims(suite, reason));
                continue;
            }
        }
        let started = Instant::now();
        let outcome = match run_suite(suite, &ctx) {
            Ok(claims) => SuiteOutcome { claims, aborted: false },
            Err(err) => SuiteOutcome { claims: failed_claims(suite, &err), aborted: true },
        };
        if suite == Suite::Spectrum && outcome.aborted {
            spectrum_aborted = Some("spectrum suite aborted".to_string());
        }
        let elapsed = started.elapsed().as_millis();
        let per_claim = elapsed / outcome.claims.len().max(1) as u128;
        for mut claim in outcome.claims {
            if claim.runtime_ms == 0 {
                claim.runtime_ms = per_claim.max(1);
            }
            report.claims.push(claim);
        }
    }

    report.write_summary(&ctx.out.join("summary.txt"))?;
    Ok(report)
}

/// Parse and render a bundle written by `run_config`.
pub fn load_bundle(dir: &Path) -> Result<VerificationReport> {
    let summary = dir.join("summary.txt");
    if !summary.is_file() {
        return Err(CliError::Bundle(format!("no summary.txt under {}", dir.display())));
    }
    VerificationReport::parse_summary(&summary)
}
