//! The auxiliary (critical-radius) function
//!
//!   1/m(x) = sup { r > 0 : r^{2−N} ∫_{B(x,r)} Ṽ(y) dy ≤ 1 },
//!
//! its power-law fit against the lower bound m(x) ≥ C (1+|x|)^{(β−α)/2},
//! and sampled reverse Hölder constant estimates for Ṽ.

use crate::ball::{ball_integral_fixed, ball_integrals, BallIntegralSpec};
use crate::error::{Error, Result};
use crate::operator::{OperatorParams, RadialCoefficients};
use crate::quad::linear_fit;
use rayon::prelude::*;

/// Relative bisection tolerance on the critical radius.
const M_REL_TOL: f64 = 1e-6;
/// Geometric scan ratio; dips narrower than 0.1% are below resolution.
const SCAN_RATIO: f64 = 1.001;
/// Interval count for the fixed-node quadrature used while bracketing.
const SCAN_NODES: usize = 128;

/// The normalized ball-mass ratio f_x(r) = r^{2−N} ∫_{B(x,r)} Ṽ, adaptive
/// quadrature.
pub fn ball_mass_ratio(params: &OperatorParams, s: f64, r: f64, rel_tol: f64) -> Result<f64> {
    let coeffs = params.coefficients();
    let field = move |t: f64| coeffs.normalized_potential(t);
    let spec = BallIntegralSpec::new(s, r, 32)?;
    let integral = ball_integrals(params.dim(), &[&field], &spec, rel_tol)?[0];
    Ok(integral * r.powi(2 - params.dim() as i32))
}

fn ball_mass_ratio_fixed(params: &OperatorParams, s: f64, r: f64) -> f64 {
    let coeffs = params.coefficients();
    let field = move |t: f64| coeffs.normalized_potential(t);
    let spec = BallIntegralSpec { center_radius: s, radius: r, quadrature_nodes: SCAN_NODES };
    ball_integral_fixed(params.dim(), &field, &spec, SCAN_NODES) * r.powi(2 - params.dim() as i32)
}

/// Shen's auxiliary function m at |x| = s.
///
/// The sup set need not be an interval, so the whole window
/// [1e−6, 1e6]·(1+s) is scanned geometrically and the LAST crossing of
/// f_x through 1 is kept; bisection with adaptive quadrature then refines
/// the bracket to relative tolerance 1e−6.
pub fn m_function(params: &OperatorParams, s: f64) -> Result<f64> {
    if !(s >= 0.0) {
        return Err(Error::Domain(format!("m_function needs s >= 0, got {s}")));
    }
    let lo = 1e-6 * (1.0 + s);
    let hi = 1e6 * (1.0 + s);

    let mut r_prev = lo;
    let mut f_prev = ball_mass_ratio_fixed(params, s, r_prev);
    let mut bracket: Option<(f64, f64)> = None;
    let mut r = lo;
    while r < hi {
        r = (r * SCAN_RATIO).min(hi);
        let f = ball_mass_ratio_fixed(params, s, r);
        if f_prev <= 1.0 && f > 1.0 {
            bracket = Some((r_prev, r));
        }
        r_prev = r;
        f_prev = f;
        if r >= hi {
            break;
        }
    }
    let (mut blo, mut bhi) = bracket.ok_or(Error::NoCrossing { lo, hi })?;

    // Re-anchor the bracket under the adaptive evaluator in case the coarse
    // scan misjudged a near-tangent crossing.
    let quad_tol = 1e-6;
    let mut f_lo = ball_mass_ratio(params, s, blo, quad_tol)?;
    while f_lo > 1.0 {
        blo /= SCAN_RATIO * SCAN_RATIO;
        f_lo = ball_mass_ratio(params, s, blo, quad_tol)?;
        if blo < lo * 0.5 {
            return Err(Error::NoCrossing { lo, hi });
        }
    }
    let mut f_hi = ball_mass_ratio(params, s, bhi, quad_tol)?;
    while f_hi <= 1.0 {
        bhi *= SCAN_RATIO * SCAN_RATIO;
        f_hi = ball_mass_ratio(params, s, bhi, quad_tol)?;
        if bhi > hi * 2.0 {
            return Err(Error::NoCrossing { lo, hi });
        }
    }

    while (bhi - blo) > M_REL_TOL * blo {
        let mid = 0.5 * (blo + bhi);
        if ball_mass_ratio(params, s, mid, quad_tol)? <= 1.0 {
            blo = mid;
        } else {
            bhi = mid;
        }
    }
    Ok(2.0 / (blo + bhi))
}

/// m over a batch of radii, evaluated in parallel with order preserved.
pub fn m_function_profile(params: &OperatorParams, radii: &[f64]) -> Result<Vec<f64>> {
    radii.par_iter().map(|&s| m_function(params, s)).collect()
}

/// Power-law profile of m with its least-squares exponent against log(1+s).
#[derive(Debug, Clone)]
pub struct MEstimate {
    pub radii: Vec<f64>,
    pub m_values: Vec<f64>,
    /// Least-squares slope of log m against log(1+s).
    pub fitted_exponent: f64,
    /// exp(intercept) of the same fit.
    pub fitted_constant: f64,
    /// Lower-bound check: slope ≥ (β−α)/2 − 0.1 (m may decay no faster
    /// than the bound).
    pub meets_lower_bound: bool,
}

impl MEstimate {
    /// Log-log interpolation of the profile, end-slope extrapolation
    /// outside the sampled range.
    pub fn interpolate(&self, s: f64) -> f64 {
        let xs: Vec<f64> = self.radii.iter().map(|r| (1.0 + r).ln()).collect();
        let ys: Vec<f64> = self.m_values.iter().map(|m| m.ln()).collect();
        let x = (1.0 + s).ln();
        let n = xs.len();
        if x <= xs[0] {
            let slope = (ys[1] - ys[0]) / (xs[1] - xs[0]);
            return (ys[0] + slope * (x - xs[0])).exp();
        }
        if x >= xs[n - 1] {
            let slope = (ys[n - 1] - ys[n - 2]) / (xs[n - 1] - xs[n - 2]);
            return (ys[n - 1] + slope * (x - xs[n - 1])).exp();
        }
        let j = xs.partition_point(|&v| v <= x).min(n - 1).max(1);
        let w = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
        (ys[j - 1] * (1.0 - w) + ys[j] * w).exp()
    }
}

/// Fit the decay exponent of m over the given |x| values (at least 4,
/// spanning two decades).
pub fn fit_m_exponent(params: &OperatorParams, radii: &[f64]) -> Result<MEstimate> {
    if radii.len() < 4 {
        return Err(Error::param("radii", format!("need at least 4 radii, got {}", radii.len())));
    }
    if radii.iter().any(|&s| !(s >= 0.0)) {
        return Err(Error::param("radii", "radii must be nonnegative".to_string()));
    }
    let positives: Vec<f64> = radii.iter().cloned().filter(|&s| s > 0.0).collect();
    let max = positives.iter().cloned().fold(f64::MIN, f64::max);
    let min = positives.iter().cloned().fold(f64::MAX, f64::min);
    if positives.len() < 2 || max / min < 100.0 - 1e-9 {
        return Err(Error::param(
            "radii",
            format!("need two decades of span, got [{min}, {max}]"),
        ));
    }
    let m_values = m_function_profile(params, radii)?;
    for (&s, &m) in radii.iter().zip(&m_values) {
        if !(m > 0.0) || !m.is_finite() {
            return Err(Error::Domain(format!("nonpositive or non-finite m({s}) = {m}")));
        }
    }
    let xs: Vec<f64> = radii.iter().map(|&s| (1.0 + s).ln()).collect();
    let ys: Vec<f64> = m_values.iter().map(|&m| m.ln()).collect();
    let (slope, intercept) = linear_fit(&xs, &ys);
    let target = 0.5 * (params.beta() - params.alpha());
    Ok(MEstimate {
        radii: radii.to_vec(),
        m_values,
        fitted_exponent: slope,
        fitted_constant: intercept.exp(),
        meets_lower_bound: slope >= target - 0.1,
    })
}

/// Sampled reverse Hölder constant for Ṽ: the max over balls of
/// ( avg_B Ṽ^q )^{1/q} / avg_B Ṽ, with the L^∞ norm replacing the q-mean
/// at q = ∞. A lower bound of the true constant.
#[derive(Debug, Clone)]
pub struct RhConstantReport {
    pub q_index: f64,
    pub constant_estimate: f64,
    pub sample_count: usize,
    /// (center_radius, radius) of the worst sampled ball.
    pub worst_ball: (f64, f64),
}

/// Reverse Hölder ratio over a single ball; `q_index` may be `f64::INFINITY`.
pub fn rh_ratio(params: &OperatorParams, q_index: f64, s: f64, r: f64) -> Result<f64> {
    let coeffs = params.coefficients();
    let dim = params.dim();
    let spec = BallIntegralSpec::new(s, r, 32)?;
    let vt = move |t: f64| coeffs.normalized_potential(t);
    let one = |_: f64| 1.0;
    if q_index.is_infinite() {
        let vals = ball_integrals(dim, &[&vt, &one], &spec, 1e-6)?;
        let mean = vals[0] / vals[1];
        let sup = sup_vtilde(params, (s - r).max(0.0), s + r);
        return Ok(sup / mean);
    }
    if !(q_index > 1.0) {
        return Err(Error::param("q_index", format!("need q > 1 or infinity, got {q_index}")));
    }
    let vt_q = move |t: f64| coeffs.normalized_potential(t).powf(q_index);
    let vals = ball_integrals(dim, &[&vt_q, &vt, &one], &spec, 1e-6)?;
    let mean_q = (vals[0] / vals[2]).powf(1.0 / q_index);
    let mean_1 = vals[1] / vals[2];
    Ok(mean_q / mean_1)
}

/// Sup of Ṽ over a radius interval. Ṽ is increasing for β ≥ α and
/// unimodal with mode (β/(α−β))^{1/α} for β < α.
fn sup_vtilde(params: &OperatorParams, t_lo: f64, t_hi: f64) -> f64 {
    let coeffs = params.coefficients();
    let (alpha, beta) = (params.alpha(), params.beta());
    if beta >= alpha {
        return coeffs.normalized_potential(t_hi);
    }
    let mode = (beta / (alpha - beta)).powf(1.0 / alpha);
    coeffs.normalized_potential(mode.clamp(t_lo, t_hi))
}

/// Max reverse Hölder ratio over the sampled (center, radius) grid.
pub fn estimate_rh_constant(
    params: &OperatorParams,
    q_index: f64,
    centers: &[f64],
    radii: &[f64],
) -> Result<RhConstantReport> {
    if centers.is_empty() || radii.is_empty() {
        return Err(Error::param("samples", "centers and radii must be non-empty".to_string()));
    }
    let balls: Vec<(f64, f64)> = centers
        .iter()
        .flat_map(|&s| radii.iter().map(move |&r| (s, r)))
        .collect();
    let ratios: Result<Vec<f64>> = balls
        .par_iter()
        .map(|&(s, r)| rh_ratio(params, q_index, s, r))
        .collect();
    let ratios = ratios?;
    let mut best = f64::MIN;
    let mut worst_ball = balls[0];
    for (&ratio, &ball) in ratios.iter().zip(&balls) {
        if ratio > best {
            best = ratio;
            worst_ball = ball;
        }
    }
    Ok(RhConstantReport {
        q_index,
        constant_estimate: best,
        sample_count: balls.len(),
        worst_ball,
    })
}

/// Default (centers, radii) sampling plan: {0} plus log-spaced centers and
/// log-spaced radii. `extra_decades` widens both ranges beyond the base
/// [1e−2, 1e3]; `per_decade` sets the sampling density.
pub fn default_ball_samples(extra_decades: u32, per_decade: usize) -> (Vec<f64>, Vec<f64>) {
    let decades = 5.0 + extra_decades as f64;
    let count = (decades * per_decade as f64).round() as usize + 1;
    let log_lo = -2.0f64;
    let mut radii = Vec::with_capacity(count);
    for i in 0..count {
        radii.push(10f64.powf(log_lo + decades * i as f64 / (count - 1) as f64));
    }
    let mut centers = vec![0.0];
    centers.extend(radii.iter().copied());
    (centers, radii)
}
