//! Green suite: Newtonian validation of the point-source solve, positivity
//! and monotone decay of G(·, 0), decay-bound constants C_k stable under
//! domain doubling, and the resolvent contract at λ ≥ 0.

use super::SuiteContext;
use crate::report::{ClaimEntry, Verdict};
use crate::table::{fmt_f64, CsvTable};
use crate::Result;
use radop::discrete::assemble_operator;
use radop::green::{green_at_origin, solve_resolvent, verify_green_bound};
use radop::grid::build_grid;
use radop::mfunc::fit_m_exponent;
use radop::special::unit_sphere_area;
use radop::tridiag::thomas_solve;
use radop::validation;
use std::time::Instant;

pub const ANCHOR: &str = "G(x,0) <= C_k (1 + m(x)|x|)^-k |x|^(2-N)";

pub fn run(ctx: &SuiteContext<'_>) -> Result<Vec<ClaimEntry>> {
    let started = Instant::now();
    let params = ctx.params;
    let g = ctx.config.grid;
    let dim = params.dim();
    let sigma = unit_sphere_area(dim);
    let mut pass = true;
    let mut details = Vec::new();

    let grading = g.grading.max(2.0);
    let base_n = g.n.min(1500);
    let grid = build_grid(dim, g.radius, base_n, grading)?;

    // Newtonian validation: same solve with the potential off
    let newt_defect = {
        let op = assemble_operator(&grid, &validation::laplacian(), 0, true)?;
        let diag: Vec<f64> = op.stiffness_diag().iter().map(|&x| -x).collect();
        let off: Vec<f64> = op.stiffness_off().iter().map(|&x| -x).collect();
        let mut rhs = vec![0.0; op.len()];
        rhs[0] = 1.0 / sigma;
        let green = thomas_solve(&diag, &off, &rhs)?;
        let mut worst = 0.0f64;
        for (&r, &v) in grid.nodes().iter().zip(&green) {
            if r < g.radius / 1000.0 || r > g.radius / 100.0 {
                continue;
            }
            let newton = r.powi(2 - dim as i32) / ((dim as f64 - 2.0) * sigma);
            worst = worst.max((v - newton).abs() / newton);
        }
        worst
    };
    if newt_defect > ctx.tol.green_newtonian_rel {
        pass = false;
        details.push(format!("Newtonian validation defect {newt_defect:.3e}"));
    }

    // the family's Green function
    let solution = green_at_origin(&params, &grid)?;
    if solution.values.iter().any(|&v| !(v > 0.0)) {
        pass = false;
        details.push("Green function not strictly positive".to_string());
    }
    if !solution.values.windows(2).all(|w| w[1] < w[0]) {
        pass = false;
        details.push("Green function not monotone decreasing".to_string());
    }
    // near-origin limit on the innermost decade
    let origin_target = 1.0 / ((dim as f64 - 2.0) * sigma);
    let r0 = solution.radii[0];
    let mut origin_defect = 0.0f64;
    for (&r, &v) in solution.radii.iter().zip(&solution.values) {
        if r > 10.0 * r0 {
            break;
        }
        let scaled = v * r.powi(dim as i32 - 2);
        origin_defect = origin_defect.max((scaled - origin_target).abs() / origin_target);
    }
    if origin_defect > ctx.tol.green_origin_rel {
        pass = false;
        details.push(format!("near-origin defect {origin_defect:.3e}"));
    }

    let mut profile = CsvTable::new(&["r", "g", "newtonian_ref"]);
    for (&r, &v) in solution.radii.iter().zip(&solution.values) {
        let newton = r.powi(2 - dim as i32) / ((dim as f64 - 2.0) * sigma);
        profile.push(vec![fmt_f64(r), fmt_f64(v), fmt_f64(newton)]);
    }
    profile.write(&ctx.csv_path("green_profile.csv"))?;

    // decay-bound constants under domain doubling
    let profile_radii: Vec<f64> = (0..12)
        .map(|i| 1e-2 * (2.0 * g.radius / 1e-2).powf(i as f64 / 11.0))
        .collect();
    let m_profile = fit_m_exponent(&params, &profile_radii)?;
    let ks = [2.0, 4.0];
    let fits_base = verify_green_bound(&solution, &m_profile, &ks)?;
    let grid_big = build_grid(dim, 2.0 * g.radius, 2 * base_n, grading)?;
    let solution_big = green_at_origin(&params, &grid_big)?;
    let fits_big = verify_green_bound(&solution_big, &m_profile, &ks)?;

    let mut bound = CsvTable::new(&["k", "c_k", "c_k_doubled", "growth", "argmax_radius"]);
    for (a, b) in fits_base.iter().zip(&fits_big) {
        let growth = (b.c_k / a.c_k - 1.0).abs();
        bound.push(vec![
            fmt_f64(a.k),
            fmt_f64(a.c_k),
            fmt_f64(b.c_k),
            fmt_f64(growth),
            fmt_f64(a.argmax_radius),
        ]);
        if !a.c_k.is_finite() || growth > ctx.tol.ck_growth {
            pass = false;
            details.push(format!("C_{} grew by {growth:.3} under domain doubling", a.k));
        }
    }
    bound.write(&ctx.csv_path("green_bound.csv"))?;

    // resolvent contract spot checks on the configured operator
    {
        let op = assemble_operator(&grid, &params.coefficients(), 0, true)?;
        let f: Vec<f64> =
            grid.nodes().iter().map(|&r| (-(r - 2.0) * (r - 2.0)).exp()).collect();
        for lambda in [0.0, 1.0] {
            let u = solve_resolvent(&op, lambda, &f)?;
            if u.iter().any(|&x| x < -1e-12) {
                pass = false;
                details.push(format!("resolvent positivity violated at lambda={lambda}"));
            }
        }
        let r0f = solve_resolvent(&op, 0.0, &f)?;
        let r1f = solve_resolvent(&op, 1.0, &f)?;
        let r0r1f = solve_resolvent(&op, 0.0, &r1f)?;
        let mut num = 0.0f64;
        let mut den = 0.0f64;
        for i in 0..op.len() {
            let lhs = r0f[i] - r1f[i];
            num += (lhs - r0r1f[i]).powi(2);
            den += lhs.powi(2);
        }
        let defect = (num / den).sqrt();
        if defect > 1e-8 {
            pass = false;
            details.push(format!("resolvent identity defect {defect:.3e}"));
        }
    }

    if pass {
        details.push(format!(
            "Newtonian defect {newt_defect:.2e}; flux residual {:.2e}; C_k stable under R-doubling",
            solution.flux_normalization_residual
        ));
    }
    Ok(vec![ClaimEntry {
        id: "green".to_string(),
        anchor: ANCHOR.to_string(),
        verdict: if pass { Verdict::BoundedSurrogate } else { Verdict::Fail },
        evidence: vec!["green_profile.csv".to_string(), "green_bound.csv".to_string()],
        runtime_ms: started.elapsed().as_millis(),
        details,
    }])
}
