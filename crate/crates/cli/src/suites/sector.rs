//! Sector suite: dissipativity shift and angle constants, the p = 2
//! resolvent-norm ray scan against the geometric bound, and sampled L^p
//! lower bounds.

use super::SuiteContext;
use crate::report::{ClaimEntry, Verdict};
use crate::table::{fmt_f64, CsvTable};
use crate::Result;
use radop::discrete::assemble_operator;
use radop::grid::build_grid;
use radop::sector::{
    dissipativity_min_slack, feasible_shift, resolvent_norm_probe_lp, resolvent_norm_scan,
    sector_angle, select_shift,
};
use radop::xcheck;
use rand::{Rng, SeedableRng};
use std::time::Instant;

pub const ANCHOR: &str = "|Im| <= delta (-Re), ||u||_p <= C_theta/|lambda| ||f||_p on Sigma_theta";

pub fn run(ctx: &SuiteContext<'_>) -> Result<Vec<ClaimEntry>> {
    let started = Instant::now();
    let params = ctx.params;
    let g = ctx.config.grid;
    let mut pass = true;
    let mut details = Vec::new();

    // shift + angle constants
    let (c_tilde, omega) = select_shift(&params);
    let scan_omega = xcheck::feasible_shift_scan(&params, c_tilde, 1e-4);
    let shift_rel = (omega - scan_omega).abs() / scan_omega.max(1e-300);
    if shift_rel > ctx.tol.shift_scan_rel {
        pass = false;
        details.push(format!("closed-form shift vs scan: rel diff {shift_rel:.3e}"));
    }
    let min_slack = dissipativity_min_slack(&params, c_tilde, omega, 1e-6, 1e6, 20_000);
    if min_slack < ctx.tol.dissipativity_floor {
        pass = false;
        details.push(format!("dissipativity slack {min_slack:.3e}"));
    }
    let angle = sector_angle(&params, c_tilde)?;
    let omega_unit = feasible_shift(&params, 1.0)?;

    let mut shift_table = CsvTable::new(&[
        "c_tilde",
        "omega",
        "omega_at_c1",
        "scan_omega",
        "rel_diff",
        "min_slack",
        "delta",
        "theta_alpha",
        "theta_reciprocal",
    ]);
    shift_table.push(vec![
        fmt_f64(c_tilde),
        fmt_f64(omega),
        fmt_f64(omega_unit),
        fmt_f64(scan_omega),
        fmt_f64(shift_rel),
        fmt_f64(min_slack),
        fmt_f64(angle.delta),
        fmt_f64(angle.theta_alpha),
        fmt_f64(angle.theta_reciprocal),
    ]);
    shift_table.write(&ctx.csv_path("sector_shift.csv"))?;

    // exact p = 2 ray scan on the configured operator
    let grid = build_grid(params.dim(), g.radius, g.n.min(900), g.grading)?;
    let op = assemble_operator(&grid, &params.coefficients(), 0, true)?;
    let pi = std::f64::consts::PI;
    let angles = [0.6 * pi, 0.75 * pi, 0.9 * pi];
    let moduli: Vec<f64> = (0..25).map(|i| 10f64.powf(-1.0 + 4.0 * i as f64 / 24.0)).collect();
    let rays = resolvent_norm_scan(&op, &angles, &moduli)?;

    let mut ray_table =
        CsvTable::new(&["angle", "modulus", "scaled_norm", "geometric_bound", "exact"]);
    for ray in &rays {
        for (&rho, &scaled) in ray.moduli.iter().zip(&ray.scaled_norms) {
            ray_table.push(vec![
                fmt_f64(ray.angle),
                fmt_f64(rho),
                fmt_f64(scaled),
                fmt_f64(ray.geometric_bound),
                ray.exact.to_string(),
            ]);
        }
        if ray.sup_scaled_norm > ray.geometric_bound + ctx.tol.ray_bound_slack {
            pass = false;
            details.push(format!(
                "ray {:.3}: sup |lambda| norm {} above 1/sin(pi - phi) = {}",
                ray.angle, ray.sup_scaled_norm, ray.geometric_bound
            ));
        }
    }

    // sampled L^p lower bounds (labelled non-exact)
    let p_probe = if (params.lebesgue_index() - 2.0).abs() > 1e-12 {
        params.lebesgue_index()
    } else {
        3.0
    };
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(ctx.config.run.seed);
    let probes: Vec<Vec<f64>> = (0..4)
        .map(|_| grid.nodes().iter().map(|_| rng.gen::<f64>() - 0.5).collect())
        .collect();
    let lp_rays = resolvent_norm_probe_lp(&op, p_probe, &angles, &moduli, &probes)?;
    for ray in &lp_rays {
        for (&rho, &scaled) in ray.moduli.iter().zip(&ray.scaled_norms) {
            ray_table.push(vec![
                fmt_f64(ray.angle),
                fmt_f64(rho),
                fmt_f64(scaled),
                fmt_f64(ray.geometric_bound),
                ray.exact.to_string(),
            ]);
        }
    }
    ray_table.write(&ctx.csv_path("sector_rays.csv"))?;

    if pass {
        details.push(format!(
            "c~={c_tilde:.4}, omega={omega:.6}, delta={:.6}; p=2 rays below 1/sin(pi-phi); p={p_probe} rows are sampled lower bounds",
            angle.delta
        ));
    }
    Ok(vec![ClaimEntry {
        id: "sector".to_string(),
        anchor: ANCHOR.to_string(),
        verdict: if pass { Verdict::Pass } else { Verdict::Fail },
        evidence: vec!["sector_shift.csv".to_string(), "sector_rays.csv".to_string()],
        runtime_ms: started.elapsed().as_millis(),
        details,
    }])
}
