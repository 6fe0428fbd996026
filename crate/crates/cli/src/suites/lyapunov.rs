//! Lyapunov suite: the computed constant dominates the ratio on a dense
//! grid and matches the brute-force scan, for γ ∈ {2.5, 3, 4}; the reverse
//! Hölder classification table ships alongside.

use super::SuiteContext;
use crate::report::{ClaimEntry, Verdict};
use crate::table::{fmt_f64, CsvTable};
use crate::Result;
use radop::operator::{classify_reverse_holder, lyapunov_constant, lyapunov_ratio};
use radop::xcheck;
use std::time::Instant;

pub const ANCHOR: &str = "A phi <= C phi, phi = 1 + r^gamma";

const GAMMAS: [f64; 3] = [2.5, 3.0, 4.0];

pub fn run(ctx: &SuiteContext<'_>) -> Result<Vec<ClaimEntry>> {
    let started = Instant::now();
    let params = ctx.params;
    let mut table = CsvTable::new(&["gamma", "c", "r_star", "oracle_c", "rel_diff", "min_slack"]);
    let mut pass = true;
    let mut details = Vec::new();

    for gamma in GAMMAS {
        let probe = lyapunov_constant(&params, gamma)?;
        let (oracle_c, _) = xcheck::lyapunov_constant_scan(&params, gamma, 1e-3, 1e3);
        let rel = (probe.constant - oracle_c).abs() / oracle_c.max(1e-300);

        // slack of the φ-relative bound on a 10^4 point grid
        let mut min_slack = f64::INFINITY;
        for i in 0..10_000 {
            let r = 10f64.powf(-6.0 + 9.0 * i as f64 / 9_999.0);
            min_slack = min_slack.min(probe.constant - lyapunov_ratio(&params, gamma, r));
        }

        let ok = rel <= ctx.tol.lyapunov_oracle_rel && min_slack >= -ctx.tol.lyapunov_slack;
        if !ok {
            pass = false;
            details.push(format!(
                "gamma={gamma}: oracle rel diff {rel:.3e}, min slack {min_slack:.3e}"
            ));
        }
        table.push(vec![
            fmt_f64(gamma),
            fmt_f64(probe.constant),
            fmt_f64(probe.r_star),
            fmt_f64(oracle_c),
            fmt_f64(rel),
            fmt_f64(min_slack),
        ]);
    }
    table.write(&ctx.csv_path("lyapunov.csv"))?;

    let mut class_table = CsvTable::new(&["class", "holds", "reason"]);
    for verdict in classify_reverse_holder(&params, Some(2.0)) {
        class_table.push(vec![
            verdict.class.to_string(),
            verdict.holds.to_string(),
            verdict.reason.clone(),
        ]);
    }
    class_table.write(&ctx.csv_path("classification.csv"))?;

    if pass {
        details.push(format!(
            "constant matches scan oracle to {:.1e} and dominates the ratio on 1e4 radii",
            ctx.tol.lyapunov_oracle_rel
        ));
    }
    Ok(vec![ClaimEntry {
        id: "lyapunov".to_string(),
        anchor: ANCHOR.to_string(),
        verdict: if pass { Verdict::Pass } else { Verdict::Fail },
        evidence: vec!["lyapunov.csv".to_string(), "classification.csv".to_string()],
        runtime_ms: started.elapsed().as_millis(),
        details,
    }])
}
