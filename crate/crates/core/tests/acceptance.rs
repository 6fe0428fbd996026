//! Acceptance suite: twelve numbered criteria, one test and one printed
//! PASS line each (run with `--nocapture` to see every line). Tolerances
//! are pinned here; nothing is deferred to later calibration.
//!
//! The default parameter sets cover beta < alpha, beta > alpha, and a
//! higher dimension: (3,3,2), (3,4,3), (4,3,2.5), (3,3,4).

use radop::ball::{ball_integrals, BallIntegralSpec};
use radop::discrete::assemble_operator;
use radop::green::{
    default_profile_family, green_at_origin, verify_green_bound, weighted_estimate_report,
    WeightedEstimateSpec,
};
use radop::grid::build_grid;
use radop::mfunc::{default_ball_samples, estimate_rh_constant, fit_m_exponent, m_function_profile};
use radop::operator::{lyapunov_constant, lyapunov_ratio, OperatorParams};
use radop::sector::{
    dissipativity_min_slack, feasible_shift, resolvent_norm_scan, select_shift,
};
use radop::semigroup::{decay_of_one, domination_check, evolve, kernel_channels, kernel_diagnostics};
use radop::spectrum::{ground_state, sign_changes, solve_spectrum};
use radop::tridiag::thomas_solve;
use radop::{validation, xcheck};
use rayon::prelude::*;

fn default_sets() -> Vec<OperatorParams> {
    vec![
        OperatorParams::new(3, 3.0, 2.0, 2.0).unwrap(),
        OperatorParams::new(3, 4.0, 3.0, 2.0).unwrap(),
        OperatorParams::new(4, 3.0, 2.5, 2.0).unwrap(),
        OperatorParams::new(3, 3.0, 4.0, 2.0).unwrap(),
    ]
}

fn baseline() -> OperatorParams {
    OperatorParams::new(3, 3.0, 2.0, 2.0).unwrap()
}

fn verdict(number: u32, name: &str, pass: bool, detail: &str) {
    let line = format!(
        "criterion {number:02} {name}: {} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
    println!("{line}");
    assert!(pass, "{line}");
}

#[test]
fn criterion_01_lyapunov_constant() {
    let mut worst_slack = f64::INFINITY;
    let mut worst_rel = 0.0f64;
    for params in default_sets() {
        for gamma in [2.5, 3.0, 4.0] {
            let probe = lyapunov_constant(&params, gamma).unwrap();
            let (oracle, _) = xcheck::lyapunov_constant_scan(&params, gamma, 1e-3, 1e3);
            let rel = (probe.constant - oracle).abs() / oracle.max(1e-300);
            worst_rel = worst_rel.max(rel);
            for i in 0..10_000 {
                let r = 10f64.powf(-6.0 + 9.0 * i as f64 / 9_999.0);
                worst_slack =
                    worst_slack.min(probe.constant - lyapunov_ratio(&params, gamma, r));
            }
        }
    }
    verdict(
        1,
        "lyapunov",
        worst_slack >= -1e-9 && worst_rel <= 1e-6,
        &format!("min slack {worst_slack:.2e}, worst oracle rel {worst_rel:.2e}"),
    );
}

#[test]
fn criterion_02_m_exponent() {
    let radii: Vec<f64> = (0..9).map(|i| 10f64.powf(1.0 + 2.0 * i as f64 / 8.0)).collect();
    let mut pass = true;
    let mut notes = Vec::new();
    for (params, target) in [
        (OperatorParams::new(3, 3.0, 2.0, 2.0).unwrap(), -0.5),
        (OperatorParams::new(3, 3.0, 4.0, 2.0).unwrap(), 0.5),
    ] {
        let estimate = fit_m_exponent(&params, &radii).unwrap();
        let err = (estimate.fitted_exponent - target).abs();
        if err > 0.1 || !estimate.meets_lower_bound {
            pass = false;
        }
        notes.push(format!("beta={}: slope {:.4}", params.beta(), estimate.fitted_exponent));
    }
    verdict(2, "m-exponent", pass, &notes.join("; "));
}

#[test]
fn criterion_03_m_oracle() {
    let mut radii = vec![0.0];
    radii.extend((0..9).map(|i| 10f64.powf(-1.0 + 2.5 * i as f64 / 8.0)));
    let mut worst = 0.0f64;
    for params in default_sets() {
        let values = m_function_profile(&params, &radii).unwrap();
        let oracle: Vec<f64> = radii
            .par_iter()
            .map(|&s| xcheck::m_function_shell_quadrature(&params, s))
            .collect::<radop::Result<Vec<f64>>>()
            .unwrap();
        for (m, o) in values.iter().zip(&oracle) {
            worst = worst.max((m - o).abs() / o);
        }
    }
    verdict(
        3,
        "m-oracle",
        worst <= 1e-4,
        &format!("worst rel diff {worst:.2e} over 10 radii x 4 sets"),
    );
}

#[test]
fn criterion_04_reverse_holder() {
    // equality case: constant fields give ratio exactly 1
    let mut unit_defect = 0.0f64;
    for (s, r) in [(0.0, 1.0), (2.0, 0.7), (10.0, 3.0)] {
        let spec = BallIntegralSpec::new(s, r, 16).unwrap();
        let q = 1.5f64;
        let c = |_: f64| 2.5f64;
        let cq = move |_: f64| 2.5f64.powf(q);
        let one = |_: f64| 1.0;
        let vals = ball_integrals(3, &[&cq, &c, &one], &spec, 1e-6).unwrap();
        let ratio = (vals[0] / vals[2]).powf(1.0 / q) / (vals[1] / vals[2]);
        unit_defect = unit_defect.max((ratio - 1.0).abs());
    }

    let params = baseline();
    let (c0, r0) = default_ball_samples(0, 2);
    let (c1, r1) = default_ball_samples(1, 6);
    let base = estimate_rh_constant(&params, 1.5, &c0, &r0).unwrap();
    let refined = estimate_rh_constant(&params, 1.5, &c1, &r1).unwrap();
    let growth = refined.constant_estimate / base.constant_estimate - 1.0;

    verdict(
        4,
        "reverse-holder",
        unit_defect <= 1e-9 && growth.abs() < 0.05 && refined.constant_estimate >= 1.0,
        &format!("unit defect {unit_defect:.2e}, q=3/2 refinement growth {growth:.2e}"),
    );
}

#[test]
fn criterion_05_spectrum() {
    let mut pass = true;
    let mut notes = Vec::new();

    // negativity + positive simple ground state for the baseline family
    let grid = build_grid(3, 30.0, 900, 2.0).unwrap();
    let coeffs = baseline().coefficients();
    for ell in 0..2u32 {
        let op = assemble_operator(&grid, &coeffs, ell, true).unwrap();
        let spec = solve_spectrum(&op, 10).unwrap();
        if spec.eigenvalues.iter().any(|&l| l >= 0.0) {
            pass = false;
            notes.push(format!("nonnegative level in ell={ell}"));
        }
    }
    let op = assemble_operator(&grid, &coeffs, 0, true).unwrap();
    let gs = ground_state(&op).unwrap();
    if !(gs.psi.iter().all(|&x| x > 0.0) && sign_changes(&gs.psi, 1e-7) == 0) {
        pass = false;
        notes.push("ground state not positive/nodeless".to_string());
    }

    // harmonic validation: lambda_0 = -3 within 1e-3 at R=12, n=2000
    let hgrid = build_grid(3, 12.0, 2000, 1.0).unwrap();
    let hop = assemble_operator(&hgrid, &validation::harmonic(), 0, true).unwrap();
    let hspec = solve_spectrum(&hop, 1).unwrap();
    let herr = (hspec.eigenvalues[0] + 3.0).abs();
    if herr > 1e-3 {
        pass = false;
    }
    notes.push(format!("harmonic lambda0 err {herr:.2e}"));

    // dense oracle at n = 60
    let sgrid = build_grid(3, 20.0, 60, 2.0).unwrap();
    let sop = assemble_operator(&sgrid, &coeffs, 0, true).unwrap();
    let sspec = solve_spectrum(&sop, 6).unwrap();
    let n = sop.len();
    let mut dense = nalgebra::DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        dense[(i, i)] = sop.stiffness_diag()[i] / sop.mass()[i];
        if i + 1 < n {
            let v = sop.stiffness_off()[i] / (sop.mass()[i] * sop.mass()[i + 1]).sqrt();
            dense[(i, i + 1)] = v;
            dense[(i + 1, i)] = v;
        }
    }
    let mut oracle: Vec<f64> = dense.symmetric_eigen().eigenvalues.iter().cloned().collect();
    oracle.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut dense_err = 0.0f64;
    for (a, b) in sspec.eigenvalues.iter().zip(&oracle) {
        dense_err = dense_err.max((a - b).abs() / (1.0 + b.abs()));
    }
    if dense_err > 1e-10 {
        pass = false;
    }
    notes.push(format!("dense oracle defect {dense_err:.2e}"));

    verdict(5, "spectrum", pass, &notes.join("; "));
}

#[test]
fn criterion_06_convergence() {
    let coeffs = baseline().coefficients();
    let lambda_at = |radius: f64, n: usize| -> f64 {
        let grid = build_grid(3, radius, n, 2.0).unwrap();
        let op = assemble_operator(&grid, &coeffs, 0, true).unwrap();
        op.scaled_tridiag().top_eigenvalues(1).unwrap()[0]
    };
    let l800 = lambda_at(30.0, 800);
    let l1600 = lambda_at(30.0, 1600);
    let l3200 = lambda_at(30.0, 3200);
    let n_rel_a = (l1600 - l800).abs() / l1600.abs();
    let n_rel_b = (l3200 - l1600).abs() / l3200.abs();
    let l_doubled = lambda_at(60.0, 3200);
    let r_rel = (l_doubled - l1600).abs() / l_doubled.abs();
    verdict(
        6,
        "convergence",
        n_rel_a < 1e-3 && n_rel_b < 1e-3 && r_rel < 1e-4,
        &format!("n-doubling {n_rel_a:.2e}/{n_rel_b:.2e}, R-doubling {r_rel:.2e}"),
    );
}

#[test]
fn criterion_07_positivity_and_domination() {
    let grid = build_grid(3, 30.0, 800, 2.0).unwrap();
    let coeffs = baseline().coefficients();
    let u0: Vec<f64> = grid.nodes().iter().map(|&r| (-(r - 2.0) * (r - 2.0)).exp()).collect();
    let sup = u0.iter().cloned().fold(0.0f64, f64::max);
    let times = [0.1, 1.0];

    let mut pass = true;
    let mut min_value = f64::INFINITY;
    let mut worst_excess = f64::NEG_INFINITY;
    for step in [1e-2, 5e-3] {
        let op = assemble_operator(&grid, &coeffs, 0, true).unwrap();
        let result = evolve(&op, &u0, &times, step).unwrap();
        for state in &result.states {
            min_value = min_value.min(state.iter().cloned().fold(f64::INFINITY, f64::min));
        }
        let report = domination_check(&grid, &coeffs, &u0, &times, step).unwrap();
        worst_excess = worst_excess.max(report.worst_excess);
        if !report.holds {
            pass = false;
        }
    }
    if min_value < -1e-12 * sup {
        pass = false;
    }
    verdict(
        7,
        "positivity-domination",
        pass,
        &format!("min node value {min_value:.2e}, worst domination excess {worst_excess:.2e}"),
    );
}

#[test]
fn criterion_08_c0_invariance_probe() {
    let coeffs = baseline().coefficients();
    let probe = decay_of_one(&coeffs, 3, 1.0, &[20.0, 40.0, 80.0], 25.0, 1e-2).unwrap();
    let half = decay_of_one(&coeffs, 3, 1.0, &[20.0, 40.0, 80.0], 25.0, 5e-3).unwrap();
    let pass = probe.decreasing_in_domain
        && half.decreasing_in_domain
        && probe.decreasing_in_radius.iter().all(|&b| b);
    verdict(
        8,
        "c0-probe",
        pass,
        &format!(
            "outer maxima {:.3e} > {:.3e} > {:.3e}, stable under step halving",
            probe.outer_max[0], probe.outer_max[1], probe.outer_max[2]
        ),
    );
}

#[test]
fn criterion_09_ultracontractivity_surrogate() {
    let coeffs = baseline().coefficients();
    let times = [0.1, 0.25, 0.5, 1.0];
    let grid_a = build_grid(3, 24.0, 700, 2.0).unwrap();
    let grid_b = build_grid(3, 24.0, 1400, 2.0).unwrap();
    let channels_a = kernel_channels(&grid_a, &coeffs, &times).unwrap();
    let channels_b = kernel_channels(&grid_b, &coeffs, &times).unwrap();
    let mut pass = true;
    let mut prev = f64::INFINITY;
    let mut worst_drift = 0.0f64;
    for &t in &times {
        let a = kernel_diagnostics(&channels_a, 3, t).unwrap();
        let b = kernel_diagnostics(&channels_b, 3, t).unwrap();
        if !(a.kernel_sup.is_finite() && a.kernel_sup > 0.0 && a.kernel_sup <= prev) {
            pass = false;
        }
        worst_drift = worst_drift.max((b.kernel_sup - a.kernel_sup).abs() / a.kernel_sup);
        prev = a.kernel_sup;
    }
    if worst_drift > 0.05 {
        pass = false;
    }
    verdict(
        9,
        "ultracontractivity",
        pass,
        &format!("diagonal sup nonincreasing, n-doubling drift {worst_drift:.2e}"),
    );
}

#[test]
fn criterion_10_green_function() {
    let params = baseline();
    let sigma = params.sphere_area();
    let mut pass = true;
    let mut notes = Vec::new();

    // Newtonian validation with the potential disabled
    let grid = build_grid(3, 20.0, 900, 2.5).unwrap();
    let lap = assemble_operator(&grid, &validation::laplacian(), 0, true).unwrap();
    let diag: Vec<f64> = lap.stiffness_diag().iter().map(|&x| -x).collect();
    let off: Vec<f64> = lap.stiffness_off().iter().map(|&x| -x).collect();
    let mut rhs = vec![0.0; lap.len()];
    rhs[0] = 1.0 / sigma;
    let newton_g = thomas_solve(&diag, &off, &rhs).unwrap();
    let mut newton_defect = 0.0f64;
    for (&r, &v) in grid.nodes().iter().zip(&newton_g) {
        if r < 20.0 / 1000.0 || r > 20.0 / 100.0 {
            continue;
        }
        newton_defect = newton_defect.max((v - 1.0 / (sigma * r)).abs() * sigma * r);
    }
    if newton_defect > 1e-2 {
        pass = false;
    }
    notes.push(format!("Newtonian defect {newton_defect:.2e}"));

    // positivity and monotone decay of the family's Green function
    let gs = green_at_origin(&params, &grid).unwrap();
    if !(gs.values.iter().all(|&v| v > 0.0) && gs.values.windows(2).all(|w| w[1] < w[0])) {
        pass = false;
        notes.push("positivity/monotonicity failed".to_string());
    }

    // C_k finite and stable under domain doubling for k in {2, 4}
    let profile_radii: Vec<f64> =
        (0..12).map(|i| 1e-2 * (40.0f64 / 1e-2).powf(i as f64 / 11.0)).collect();
    let m_profile = fit_m_exponent(&params, &profile_radii).unwrap();
    let ks = [2.0, 4.0];
    let fits_a = verify_green_bound(&gs, &m_profile, &ks).unwrap();
    let grid_b = build_grid(3, 40.0, 1800, 2.5).unwrap();
    let gs_b = green_at_origin(&params, &grid_b).unwrap();
    let fits_b = verify_green_bound(&gs_b, &m_profile, &ks).unwrap();
    let mut worst_growth = 0.0f64;
    for (a, b) in fits_a.iter().zip(&fits_b) {
        if !a.c_k.is_finite() {
            pass = false;
        }
        worst_growth = worst_growth.max((b.c_k / a.c_k - 1.0).abs());
    }
    if worst_growth > 0.10 {
        pass = false;
    }
    notes.push(format!("C_k growth under R-doubling {worst_growth:.2e}"));

    verdict(10, "green", pass, &notes.join("; "));
}

#[test]
fn criterion_11_weighted_estimates() {
    let params = baseline();
    let beta = params.beta();
    let mut pass = true;
    let mut worst = 0.0f64;
    for p in [2.0, 3.0] {
        for gamma in [0.0, beta / 2.0, beta] {
            let spec = WeightedEstimateSpec {
                gamma,
                p,
                family: default_profile_family(),
                domains: vec![30.0, 60.0],
            };
            let report = weighted_estimate_report(&params, &spec, 700, 2.0).unwrap();
            for growth in
                [report.growth.weight, report.growth.potential, report.growth.gradient]
            {
                worst = worst.max(growth.abs());
                if growth.abs() > 0.10 {
                    pass = false;
                }
            }
        }
    }
    verdict(
        11,
        "weighted-estimates",
        pass,
        &format!("worst domain-doubling growth {worst:.2e} over p in {{2,3}}, three estimates"),
    );
}

#[test]
fn criterion_12_sector() {
    let mut pass = true;
    let mut notes = Vec::new();

    // closed-form shift vs dense scan, and the feasibility slack
    let mut worst_rel = 0.0f64;
    let mut worst_slack = f64::INFINITY;
    for params in default_sets() {
        let (c_tilde, omega) = select_shift(&params);
        for c in [c_tilde, 1.0] {
            let closed = feasible_shift(&params, c).unwrap();
            let scan = xcheck::feasible_shift_scan(&params, c, 1e-4);
            worst_rel = worst_rel.max((closed - scan).abs() / scan.max(1e-300));
        }
        worst_slack =
            worst_slack.min(dissipativity_min_slack(&params, c_tilde, omega, 1e-6, 1e6, 20_000));
    }
    if worst_rel > 1e-6 || worst_slack < -1e-9 {
        pass = false;
    }
    notes.push(format!("shift scan rel {worst_rel:.2e}, min slack {worst_slack:.2e}"));

    // p = 2 ray scan against the geometric bound
    let grid = build_grid(3, 24.0, 700, 2.0).unwrap();
    let op = assemble_operator(&grid, &baseline().coefficients(), 0, true).unwrap();
    let pi = std::f64::consts::PI;
    let moduli: Vec<f64> = (0..25).map(|i| 10f64.powf(-1.0 + 4.0 * i as f64 / 24.0)).collect();
    let rays = resolvent_norm_scan(&op, &[0.6 * pi, 0.75 * pi, 0.9 * pi], &moduli).unwrap();
    let mut worst_excess = f64::NEG_INFINITY;
    for ray in &rays {
        worst_excess = worst_excess.max(ray.sup_scaled_norm - ray.geometric_bound);
    }
    if worst_excess > 1e-8 {
        pass = false;
    }
    notes.push(format!("ray bound excess {worst_excess:.2e}"));

    verdict(12, "sector", pass, &notes.join("; "));
}
