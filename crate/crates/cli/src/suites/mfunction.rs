//! Auxiliary-function suite: decay-exponent fit of m against
//! (1+|x|)^{(β−α)/2} and agreement with the independent shell-quadrature
//! route.

use super::SuiteContext;
use crate::report::{ClaimEntry, Verdict};
use crate::table::{fmt_f64, CsvTable};
use crate::Result;
use radop::mfunc::{fit_m_exponent, m_function_profile};
use radop::xcheck;
use rayon::prelude::*;
use std::time::Instant;

pub const ANCHOR_EXPONENT: &str = "m(x) >= C (1+|x|)^((beta-alpha)/2)";
pub const ANCHOR_ORACLE: &str = "1/m(x) = sup{ r : r^(2-N) int_B(x,r) Vtilde <= 1 }";

pub fn run(ctx: &SuiteContext<'_>) -> Result<Vec<ClaimEntry>> {
    let params = ctx.params;
    let mut claims = Vec::new();

    // exponent fit over two decades
    let started = Instant::now();
    let fit_radii: Vec<f64> = (0..9).map(|i| 10f64.powf(1.0 + 2.0 * i as f64 / 8.0)).collect();
    let estimate = fit_m_exponent(&params, &fit_radii)?;
    let target = 0.5 * (params.beta() - params.alpha());
    let slope_err = (estimate.fitted_exponent - target).abs();
    let exponent_ok = slope_err <= ctx.tol.m_slope_window && estimate.meets_lower_bound;

    let mut profile_table = CsvTable::new(&["s", "m"]);
    for (&s, &m) in estimate.radii.iter().zip(&estimate.m_values) {
        profile_table.push(vec![fmt_f64(s), fmt_f64(m)]);
    }
    profile_table.write(&ctx.csv_path("mfunction_profile.csv"))?;

    let mut fit_table =
        CsvTable::new(&["fitted_exponent", "fitted_constant", "target_exponent", "window"]);
    fit_table.push(vec![
        fmt_f64(estimate.fitted_exponent),
        fmt_f64(estimate.fitted_constant),
        fmt_f64(target),
        fmt_f64(ctx.tol.m_slope_window),
    ]);
    fit_table.write(&ctx.csv_path("mfunction_fit.csv"))?;

    claims.push(ClaimEntry {
        id: "m-exponent".to_string(),
        anchor: ANCHOR_EXPONENT.to_string(),
        verdict: if exponent_ok { Verdict::Pass } else { Verdict::Fail },
        evidence: vec!["mfunction_profile.csv".to_string(), "mfunction_fit.csv".to_string()],
        runtime_ms: started.elapsed().as_millis(),
        details: vec![format!(
            "log-log slope {:.4} vs target {:.4} (window {})",
            estimate.fitted_exponent, target, ctx.tol.m_slope_window
        )],
    });

    // oracle agreement at 10 radii
    let started = Instant::now();
    let mut oracle_radii = vec![0.0];
    oracle_radii.extend((0..9).map(|i| 10f64.powf(-1.0 + 2.5 * i as f64 / 8.0)));
    let m_values = m_function_profile(&params, &oracle_radii)?;
    let oracle_values: Vec<f64> = oracle_radii
        .par_iter()
        .map(|&s| xcheck::m_function_shell_quadrature(&params, s))
        .collect::<radop::Result<Vec<f64>>>()?;

    let mut oracle_table = CsvTable::new(&["s", "m", "oracle_m", "rel_diff"]);
    let mut worst_rel = 0.0f64;
    for ((&s, &m), &oracle) in oracle_radii.iter().zip(&m_values).zip(&oracle_values) {
        let rel = (m - oracle).abs() / oracle;
        worst_rel = worst_rel.max(rel);
        oracle_table.push(vec![fmt_f64(s), fmt_f64(m), fmt_f64(oracle), fmt_f64(rel)]);
    }
    oracle_table.write(&ctx.csv_path("mfunction_oracle.csv"))?;

    let oracle_ok = worst_rel <= ctx.tol.m_oracle_rel;
    claims.push(ClaimEntry {
        id: "m-oracle".to_string(),
        anchor: ANCHOR_ORACLE.to_string(),
        verdict: if oracle_ok { Verdict::Pass } else { Verdict::Fail },
        evidence: vec!["mfunction_oracle.csv".to_string()],
        runtime_ms: started.elapsed().as_millis(),
        details: vec![format!(
            "worst relative difference {worst_rel:.3e} over {} radii (tolerance {:.1e})",
            oracle_radii.len(),
            ctx.tol.m_oracle_rel
        )],
    });

    Ok(claims)
}
