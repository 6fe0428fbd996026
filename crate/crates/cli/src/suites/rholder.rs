//! Reverse Hölder suite: the sampled constant for Ṽ stabilizes under a
//! 10x refinement of the ball plan whenever the sufficient condition
//! β − α > −N/q holds, and keeps growing for an exponent that violates it.

use super::SuiteContext;
use crate::report::{ClaimEntry, Verdict};
use crate::table::{fmt_f64, CsvTable};
use crate::Result;
use radop::ball::{ball_integrals, BallIntegralSpec};
use radop::mfunc::{default_ball_samples, estimate_rh_constant};
use std::time::Instant;

pub const ANCHOR: &str = "(avg_B Vtilde^q)^(1/q) <= C avg_B Vtilde";

pub fn run(ctx: &SuiteContext<'_>) -> Result<Vec<ClaimEntry>> {
    let started = Instant::now();
    let params = ctx.params;
    let dim = params.dim();
    let mut details = Vec::new();
    let mut pass = true;

    // equality case of Hölder: a constant field has ratio exactly 1
    let unit_defect = {
        let spec = BallIntegralSpec::new(2.0, 0.7, 16)?;
        let q = 1.5f64;
        let c = |_: f64| 3.25f64;
        let cq = move |_: f64| 3.25f64.powf(q);
        let one = |_: f64| 1.0;
        let vals = ball_integrals(dim, &[&cq, &c, &one], &spec, 1e-6)?;
        let ratio = (vals[0] / vals[2]).powf(1.0 / q) / (vals[1] / vals[2]);
        (ratio - 1.0).abs()
    };
    if unit_defect > ctx.tol.rh_unit {
        pass = false;
        details.push(format!("constant-field ratio defect {unit_defect:.3e}"));
    }

    let (centers_base, radii_base) = default_ball_samples(0, 2);
    let (centers_fine, radii_fine) = default_ball_samples(1, 6);

    let mut table = CsvTable::new(&[
        "q",
        "condition_holds",
        "base_samples",
        "base_estimate",
        "refined_samples",
        "refined_estimate",
        "growth",
        "worst_center",
        "worst_radius",
    ]);

    // a stable exponent: q = N/2 always satisfies β − α > −2
    let q_stable = dim as f64 / 2.0;
    let base = estimate_rh_constant(&params, q_stable, &centers_base, &radii_base)?;
    let refined = estimate_rh_constant(&params, q_stable, &centers_fine, &radii_fine)?;
    let growth = refined.constant_estimate / base.constant_estimate - 1.0;
    table.push(vec![
        fmt_f64(q_stable),
        "true".to_string(),
        base.sample_count.to_string(),
        fmt_f64(base.constant_estimate),
        refined.sample_count.to_string(),
        fmt_f64(refined.constant_estimate),
        fmt_f64(growth),
        fmt_f64(refined.worst_ball.0),
        fmt_f64(refined.worst_ball.1),
    ]);
    if growth.abs() > ctx.tol.rh_growth {
        pass = false;
        details.push(format!("q={q_stable}: estimate grew by {growth:.3} under refinement"));
    } else {
        details.push(format!(
            "q={q_stable}: estimate {:.6} stable under 10x refinement (growth {growth:.2e})",
            refined.constant_estimate
        ));
    }

    // negative control: pick q with β − α < −N/q, only possible when β < α
    let diff = params.beta() - params.alpha();
    if diff < 0.0 {
        let q_bad = (2.0 * dim as f64 / (-diff)).max(4.0);
        let base = estimate_rh_constant(&params, q_bad, &centers_base, &radii_base)?;
        let refined = estimate_rh_constant(&params, q_bad, &centers_fine, &radii_fine)?;
        let growth = refined.constant_estimate / base.constant_estimate - 1.0;
        table.push(vec![
            fmt_f64(q_bad),
            "false".to_string(),
            base.sample_count.to_string(),
            fmt_f64(base.constant_estimate),
            refined.sample_count.to_string(),
            fmt_f64(refined.constant_estimate),
            fmt_f64(growth),
            fmt_f64(refined.worst_ball.0),
            fmt_f64(refined.worst_ball.1),
        ]);
        if growth <= ctx.tol.rh_growth {
            pass = false;
            details.push(format!(
                "q={q_bad}: expected unbounded growth, saw {growth:.3e}"
            ));
        } else {
            details.push(format!(
                "q={q_bad}: sufficient condition fails and the estimate grew by {growth:.3}"
            ));
        }
    } else {
        details.push("beta >= alpha: Vtilde is in B_inf, no failing exponent exists".to_string());
    }

    table.write(&ctx.csv_path("rholder.csv"))?;

    Ok(vec![ClaimEntry {
        id: "rholder".to_string(),
        anchor: ANCHOR.to_string(),
        verdict: if pass { Verdict::BoundedSurrogate } else { Verdict::Fail },
        evidence: vec!["rholder.csv".to_string()],
        runtime_ms: started.elapsed().as_millis(),
        details,
    }])
}
