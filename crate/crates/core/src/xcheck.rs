//! Independent cross-check routes.
//!
//! Everything here deliberately avoids the primary code paths it is used to
//! check: different integral decompositions, different root refinement,
//! different time-vs-solve realizations. The verification suites compare
//! the primary results against these.

use crate::error::{Error, Result};
use crate::operator::{OperatorParams, RadialCoefficients};
use crate::quad::{adaptive_simpson, gauss_legendre, golden_max, simpson};
use crate::special::unit_sphere_area;

/// Brute-force Lyapunov constant: linear scan of the ratio over (0, r_max]
/// with the given step, then golden-section refinement of the best bracket.
pub fn lyapunov_constant_scan(
    params: &OperatorParams,
    gamma: f64,
    step: f64,
    r_max: f64,
) -> (f64, f64) {
    let ratio = |r: f64| crate::operator::lyapunov_ratio(params, gamma, r);
    let count = (r_max / step) as usize;
    let mut best = f64::NEG_INFINITY;
    let mut best_r = step;
    for i in 1..=count {
        let r = i as f64 * step;
        let v = ratio(r);
        if v > best {
            best = v;
            best_r = r;
        }
    }
    if best <= 0.0 {
        return (0.0, 0.0);
    }
    let (r_star, c) = golden_max(&ratio, (best_r - step).max(step * 1e-3), best_r + step, 120);
    (c.max(0.0), r_star)
}

/// Ball integral of Ṽ through the decomposition into spheres centered at x
/// (not at the origin): ∫_B(x,r) Ṽ = σ ∫_0^r ρ^{N−1} avg_θ Ṽ(|x+ρω|) dρ,
/// with a Gauss–Legendre angular average. At s = 0 this reduces to the
/// plain 1-D radial integral.
fn ball_integral_centered_shells(
    params: &OperatorParams,
    s: f64,
    r: f64,
    rho_intervals: usize,
) -> f64 {
    let coeffs = params.coefficients();
    let dim = params.dim();
    let sigma = unit_sphere_area(dim);
    if s == 0.0 {
        let g = |rho: f64| coeffs.normalized_potential(rho) * rho.powi(dim as i32 - 1);
        return sigma * simpson(&g, 0.0, r, rho_intervals.max(4));
    }
    let (theta_nodes, theta_weights) = gauss_legendre(48);
    // normalization ∫_0^π sin^{N−2}θ dθ
    let total: f64 = theta_nodes
        .iter()
        .zip(&theta_weights)
        .map(|(&u, &w)| {
            let theta = 0.5 * (u + 1.0) * std::f64::consts::PI;
            w * theta.sin().powi(dim as i32 - 2)
        })
        .sum();
    let avg = |rho: f64| -> f64 {
        let acc: f64 = theta_nodes
            .iter()
            .zip(&theta_weights)
            .map(|(&u, &w)| {
                let theta = 0.5 * (u + 1.0) * std::f64::consts::PI;
                let dist = (s * s + rho * rho + 2.0 * s * rho * theta.cos()).max(0.0).sqrt();
                w * theta.sin().powi(dim as i32 - 2) * coeffs.normalized_potential(dist)
            })
            .sum();
        acc / total
    };
    let g = |rho: f64| avg(rho) * rho.powi(dim as i32 - 1);
    sigma * simpson(&g, 0.0, r, rho_intervals.max(4))
}

fn mass_ratio_shells(params: &OperatorParams, s: f64, r: f64, rho_intervals: usize) -> f64 {
    ball_integral_centered_shells(params, s, r, rho_intervals)
        * r.powi(2 - params.dim() as i32)
}

/// Independent m(x) evaluation: x-centered shell quadrature for the ball
/// mass, geometric scan at ratio 1.02 for the last unit crossing, then
/// regula falsi refinement.
pub fn m_function_shell_quadrature(params: &OperatorParams, s: f64) -> Result<f64> {
    let lo = 1e-6 * (1.0 + s);
    let hi = 1e6 * (1.0 + s);
    let coarse = 512;

    let mut r_prev = lo;
    let mut f_prev = mass_ratio_shells(params, s, r_prev, coarse);
    let mut bracket = None;
    let mut r = lo;
    while r < hi {
        r = (r * 1.02).min(hi);
        let f = mass_ratio_shells(params, s, r, coarse);
        if f_prev <= 1.0 && f > 1.0 {
            bracket = Some((r_prev, f_prev, r, f));
        }
        r_prev = r;
        f_prev = f;
        if r >= hi {
            break;
        }
    }
    let (mut a, _, mut b, _) = bracket.ok_or(Error::NoCrossing { lo, hi })?;
    let fine = 2048;
    let mut fa = mass_ratio_shells(params, s, a, fine) - 1.0;
    let mut fb = mass_ratio_shells(params, s, b, fine) - 1.0;
    if fa > 0.0 || fb <= 0.0 {
        // re-establish the bracket under the fine evaluator
        while fa > 0.0 {
            a /= 1.04;
            fa = mass_ratio_shells(params, s, a, fine) - 1.0;
        }
        while fb <= 0.0 {
            b *= 1.04;
            fb = mass_ratio_shells(params, s, b, fine) - 1.0;
        }
    }
    while (b - a) > 1e-8 * a {
        let mid = 0.5 * (a + b);
        if mass_ratio_shells(params, s, mid, fine) <= 1.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(2.0 / (a + b))
}

/// Direct quadrature of the Rayleigh quotient
/// −(∫(ψ'² + Ṽψ²) r^{N−1} dr) / (∫ ψ² r^{N−1}/a dr) on [0, R].
pub fn rayleigh_quotient_quadrature(
    coeffs: &dyn RadialCoefficients,
    dim: u32,
    radius: f64,
    psi: &dyn Fn(f64) -> f64,
    dpsi: &dyn Fn(f64) -> f64,
) -> Result<f64> {
    let power = dim as i32 - 1;
    let num = adaptive_simpson(
        &|r: f64| {
            let d = dpsi(r);
            let p = psi(r);
            (d * d + coeffs.normalized_potential(r) * p * p) * r.powi(power)
        },
        0.0,
        radius,
        1e-10,
    )?;
    let den = adaptive_simpson(
        &|r: f64| {
            let p = psi(r);
            p * p * r.powi(power) * coeffs.inverse_diffusion(r)
        },
        0.0,
        radius,
        1e-12,
    )?;
    Ok(-num / den)
}

/// Dense linear scan for the dissipativity shift
/// ω = max(0, sup_r [(α(N−2+α)/p + c̃) r^{α−2} − r^β]).
pub fn feasible_shift_scan(params: &OperatorParams, c_tilde: f64, step: f64) -> f64 {
    let alpha = params.alpha();
    let beta = params.beta();
    let k = alpha * (params.dim() as f64 - 2.0 + alpha) / params.lebesgue_index() + c_tilde;
    let g = |r: f64| k * r.powf(alpha - 2.0) - r.powf(beta);
    let r_star_guess = (k * (alpha - 2.0) / beta).powf(1.0 / (beta - alpha + 2.0));
    let r_hi = (4.0 * r_star_guess).max(10.0);
    let count = (r_hi / step) as usize;
    let mut best = 0.0f64;
    let mut best_r = 0.0;
    for i in 1..=count {
        let r = i as f64 * step;
        let v = g(r);
        if v > best {
            best = v;
            best_r = r;
        }
    }
    if best <= 0.0 {
        return 0.0;
    }
    let (_r, c) = golden_max(&g, (best_r - step).max(step * 0.5), best_r + step, 100);
    c.max(0.0)
}

/// Unit-diffusion adapter exposing the family's normalized potential, for
/// time-integrating the tilde semigroup.
struct TildeAdapter {
    inner: crate::operator::CoefficientField,
}

impl RadialCoefficients for TildeAdapter {
    fn diffusion(&self, _r: f64) -> f64 {
        1.0
    }
    fn potential(&self, r: f64) -> f64 {
        self.inner.normalized_potential(r)
    }
    fn inverse_diffusion(&self, _r: f64) -> f64 {
        1.0
    }
}

/// Green function of Δ − Ṽ by time integration of its heat semigroup:
/// G(r, 0) = ∫₀^T p̃(t, r, 0) dt with T chosen so e^{λ̃₀ T} < 1e−8.
/// Own Crank–Nicolson loop (implicit-Euler startup) with trapezoidal
/// accumulation across every substep; independent of the direct solve.
pub fn green_by_time_integration(
    params: &OperatorParams,
    grid: &crate::grid::RadialGrid,
) -> Result<Vec<f64>> {
    let tilde = TildeAdapter { inner: params.coefficients() };
    let op = crate::discrete::assemble_operator(grid, &tilde, 0, true)?;
    let n = op.len();
    let tri = op.scaled_tridiag();
    let lambda0 = tri.eigenvalue_by_index(n - 1)?;
    if !(lambda0 < 0.0) {
        return Err(Error::EigenSolve(format!("tilde ground level {lambda0} not negative")));
    }
    let t_final = (1e8f64).ln() / (-lambda0);
    let steps = 40_000usize;
    let h = t_final / steps as f64;

    let m = op.mass();
    let kd = op.stiffness_diag();
    let ko = op.stiffness_off();
    let lhs_diag: Vec<f64> = (0..n).map(|i| m[i] - 0.5 * h * kd[i]).collect();
    let lhs_off: Vec<f64> = (0..n - 1).map(|i| -0.5 * h * ko[i]).collect();
    let factor = crate::tridiag::ThomasFactor::new(&lhs_diag, &lhs_off)?;

    // delta of unit N-dimensional mass at the innermost node: the radial
    // density carries the 1/σ_{N−1} factor
    let mut u = vec![0.0; n];
    u[0] = 1.0 / (m[0] * params.sphere_area());
    let mut integral = vec![0.0; n];

    let cn_rhs = |u: &[f64]| -> Vec<f64> {
        (0..n)
            .map(|i| {
                let mut acc = (m[i] + 0.5 * h * kd[i]) * u[i];
                if i > 0 {
                    acc += 0.5 * h * ko[i - 1] * u[i - 1];
                }
                if i + 1 < n {
                    acc += 0.5 * h * ko[i] * u[i + 1];
                }
                acc
            })
            .collect()
    };

    for step_idx in 0..steps {
        let prev = u.clone();
        if step_idx == 0 {
            // two implicit-Euler half-steps (same factor as Crank–Nicolson)
            for _ in 0..2 {
                let mut rhs: Vec<f64> = u.iter().zip(m).map(|(x, mi)| x * mi).collect();
                factor.solve_into(&mut rhs);
                u = rhs;
            }
        } else {
            let mut rhs = cn_rhs(&u);
            factor.solve_into(&mut rhs);
            u = rhs;
        }
        for i in 0..n {
            integral[i] += 0.5 * h * (prev[i] + u[i]);
        }
    }
    Ok(integral)
}
