//! Spectrum suite: negativity, M-orthonormality, residuals, ground-state
//! positivity and oscillation counts, plus grid- and domain-refinement
//! convergence of the ground level.

use super::SuiteContext;
use crate::report::{ClaimEntry, Verdict};
use crate::table::{fmt_f64, CsvTable};
use crate::Result;
use radop::discrete::assemble_operator;
use radop::grid::build_grid;
use radop::spectrum::{accumulation_check, ground_state, sign_changes, solve_spectrum};
use std::time::Instant;

pub const ANCHOR_SPECTRUM: &str =
    "sigma(A) = { lambda_k } real, negative, ground space spanned by psi > 0";
pub const ANCHOR_CONVERGENCE: &str = "lambda_0 Cauchy under n-doubling and R-doubling";

pub fn run(ctx: &SuiteContext<'_>) -> Result<Vec<ClaimEntry>> {
    let params = ctx.params;
    let coeffs = params.coefficients();
    let g = ctx.config.grid;
    let mut claims = Vec::new();

    // ---- spectral contract on the configured grid
    let started = Instant::now();
    let mut pass = true;
    let mut details = Vec::new();
    let grid = build_grid(params.dim(), g.radius, g.n, g.grading)?;
    let k = 10.min(g.n);

    let mut table = CsvTable::new(&["ell", "k", "lambda", "residual"]);
    let mut ground_by_ell = Vec::new();
    for ell in 0..2u32 {
        let op = assemble_operator(&grid, &coeffs, ell, true)?;
        let spec = solve_spectrum(&op, k)?;
        if spec.eigenvalues.iter().any(|&l| l >= 0.0) {
            pass = false;
            details.push(format!("ell={ell}: nonnegative eigenvalue found"));
        }
        let defect = spec.orthonormality_defect(&op);
        if defect > ctx.tol.ortho_defect {
            pass = false;
            details.push(format!("ell={ell}: orthonormality defect {defect:.3e}"));
        }
        for (lambda, residual) in spec.eigenvalues.iter().zip(&spec.residuals) {
            if *residual > ctx.tol.residual_scale * (lambda.abs() + 1.0) {
                pass = false;
                details.push(format!("ell={ell}: residual {residual:.3e} at {lambda:.6}"));
            }
        }
        for (idx, (lambda, residual)) in
            spec.eigenvalues.iter().zip(&spec.residuals).enumerate()
        {
            table.push(vec![
                ell.to_string(),
                idx.to_string(),
                fmt_f64(*lambda),
                fmt_f64(*residual),
            ]);
        }
        ground_by_ell.push(spec.eigenvalues[0]);

        if ell == 0 {
            let gs = ground_state(&op)?;
            if gs.psi.iter().any(|&x| !(x > 0.0)) {
                pass = false;
                details.push("ground eigenvector not strictly positive".to_string());
            }
            if sign_changes(&gs.psi, 1e-7) != 0 {
                pass = false;
                details.push("ground eigenvector changes sign".to_string());
            }
            for (idx, psi) in spec.eigenvectors.iter().enumerate().take(5) {
                let changes = sign_changes(psi, 1e-7);
                if changes != idx {
                    pass = false;
                    details.push(format!(
                        "eigenvector {idx} has {changes} sign changes (oscillation theory)"
                    ));
                }
            }
            let acc = accumulation_check(&spec);
            if !acc.strictly_decreasing {
                pass = false;
                details.push("level gaps not strictly positive".to_string());
            }
            let mut gaps = CsvTable::new(&["k", "gap"]);
            for (idx, gap) in acc.gaps.iter().enumerate() {
                gaps.push(vec![idx.to_string(), fmt_f64(*gap)]);
            }
            gaps.write(&ctx.csv_path("spectrum_gaps.csv"))?;
        }
    }
    if ground_by_ell[1] >= ground_by_ell[0] {
        pass = false;
        details.push("ell=1 channel does not lie below the ell=0 ground level".to_string());
    }
    table.write(&ctx.csv_path("spectrum.csv"))?;
    if pass {
        details.push(format!(
            "{} levels per channel, all negative; ground level {:.8}",
            k, ground_by_ell[0]
        ));
    }
    claims.push(ClaimEntry {
        id: "spectrum".to_string(),
        anchor: ANCHOR_SPECTRUM.to_string(),
        verdict: if pass { Verdict::Pass } else { Verdict::Fail },
        evidence: vec!["spectrum.csv".to_string(), "spectrum_gaps.csv".to_string()],
        runtime_ms: started.elapsed().as_millis(),
        details,
    });

    // ---- convergence of the ground level
    let started = Instant::now();
    let mut pass = true;
    let mut details = Vec::new();
    let lambda_at = |radius: f64, n: usize| -> Result<f64> {
        let grid = build_grid(params.dim(), radius, n, g.grading)?;
        let op = assemble_operator(&grid, &coeffs, 0, true)?;
        Ok(op.scaled_tridiag().top_eigenvalues(1)?[0])
    };
    let n0 = g.n.max(800);
    let l_n = lambda_at(g.radius, n0)?;
    let l_2n = lambda_at(g.radius, 2 * n0)?;
    let n_rel = (l_2n - l_n).abs() / l_2n.abs();
    if n_rel > ctx.tol.n_doubling_rel {
        pass = false;
        details.push(format!("n-doubling change {n_rel:.3e} above {:.1e}", ctx.tol.n_doubling_rel));
    }
    let l_2r = lambda_at(2.0 * g.radius, 2 * n0)?;
    let r_rel = (l_2r - l_2n).abs() / l_2r.abs();
    if r_rel > ctx.tol.r_doubling_rel {
        pass = false;
        details.push(format!("R-doubling change {r_rel:.3e} above {:.1e}", ctx.tol.r_doubling_rel));
    }
    let mut conv = CsvTable::new(&["radius", "n", "lambda0", "rel_change"]);
    conv.push(vec![fmt_f64(g.radius), n0.to_string(), fmt_f64(l_n), String::new()]);
    conv.push(vec![fmt_f64(g.radius), (2 * n0).to_string(), fmt_f64(l_2n), fmt_f64(n_rel)]);
    conv.push(vec![fmt_f64(2.0 * g.radius), (2 * n0).to_string(), fmt_f64(l_2r), fmt_f64(r_rel)]);
    conv.write(&ctx.csv_path("convergence.csv"))?;
    if pass {
        details.push(format!(
            "lambda0 = {l_2n:.8}: n-doubling {n_rel:.2e}, R-doubling {r_rel:.2e}"
        ));
    }
    claims.push(ClaimEntry {
        id: "convergence".to_string(),
        anchor: ANCHOR_CONVERGENCE.to_string(),
        verdict: if pass { Verdict::Pass } else { Verdict::Fail },
        evidence: vec!["convergence.csv".to_string()],
        runtime_ms: started.elapsed().as_millis(),
        details,
    });

    Ok(claims)
}
