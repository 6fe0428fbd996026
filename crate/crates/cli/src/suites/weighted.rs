//! Weighted-estimate suite: sup ratios of ‖r^γ u‖_p, ‖V u‖_p and
//! ‖(1+r^{α−1}) u'‖_p over the shipped profile family, required to stay
//! within 10% under domain doubling for p ∈ {2, 3} and γ ∈ {0, β/2, β}.

use super::SuiteContext;
use crate::report::{ClaimEntry, Verdict};
use crate::table::{fmt_f64, CsvTable};
use crate::Result;
use radop::green::{default_profile_family, weighted_estimate_report, WeightedEstimateSpec};
use std::time::Instant;

pub const ANCHOR: &str =
    "||r^g u||_p <= C ||Au||_p, ||V u||_p <= C ||Au||_p, ||(1+r^(a-1)) u'||_p <= C(||Au||_p + ||u||_p)";

pub fn run(ctx: &SuiteContext<'_>) -> Result<Vec<ClaimEntry>> {
    let started = Instant::now();
    let params = ctx.params;
    let g = ctx.config.grid;
    let beta = params.beta();
    let mut pass = true;
    let mut details = Vec::new();

    let base_n = g.n.min(900);
    let domains = vec![g.radius, 2.0 * g.radius];
    let mut table = CsvTable::new(&[
        "p",
        "gamma",
        "profile",
        "domain",
        "weight_ratio",
        "potential_ratio",
        "gradient_ratio",
    ]);
    let mut summary = CsvTable::new(&[
        "p",
        "gamma",
        "weight_growth",
        "potential_growth",
        "gradient_growth",
    ]);

    for p in [2.0, 3.0] {
        for gamma in [0.0, beta / 2.0, beta] {
            let spec = WeightedEstimateSpec {
                gamma,
                p,
                family: default_profile_family(),
                domains: domains.clone(),
            };
            let report = weighted_estimate_report(&params, &spec, base_n, g.grading)?;
            for (name, domain, ratios) in &report.rows {
                table.push(vec![
                    fmt_f64(p),
                    fmt_f64(gamma),
                    name.clone(),
                    fmt_f64(*domain),
                    fmt_f64(ratios.weight),
                    fmt_f64(ratios.potential),
                    fmt_f64(ratios.gradient),
                ]);
            }
            summary.push(vec![
                fmt_f64(p),
                fmt_f64(gamma),
                fmt_f64(report.growth.weight),
                fmt_f64(report.growth.potential),
                fmt_f64(report.growth.gradient),
            ]);
            for (label, growth) in [
                ("weight", report.growth.weight),
                ("potential", report.growth.potential),
                ("gradient", report.growth.gradient),
            ] {
                if growth.abs() > ctx.tol.weighted_growth {
                    pass = false;
                    details.push(format!(
                        "p={p} gamma={gamma}: {label} ratio grew by {growth:.3} under doubling"
                    ));
                }
            }
        }
    }
    table.write(&ctx.csv_path("weighted.csv"))?;
    summary.write(&ctx.csv_path("weighted_growth.csv"))?;

    if pass {
        details.push(format!(
            "all sup ratios bounded (surrogate): growth under domain doubling <= {:.0}%",
            100.0 * ctx.tol.weighted_growth
        ));
    }
    Ok(vec![ClaimEntry {
        id: "weighted".to_string(),
        anchor: ANCHOR.to_string(),
        verdict: if pass { Verdict::BoundedSurrogate } else { Verdict::Fail },
        evidence: vec!["weighted.csv".to_string(), "weighted_growth.csv".to_string()],
        runtime_ms: started.elapsed().as_millis(),
        details,
    }])
}
