//! Integrals of radial fields over off-center balls, reduced to one
//! dimension with spherical-cap surface weights.
//!
//! For |x| = s, the sphere of radius t about the origin meets B(x, r) in a
//! cap of polar half-angle θ with cos θ = (s² + t² − r²)/(2st) (clamped).
//! Its surface fraction is expressed through the regularized incomplete
//! beta function, so
//!
//!   ∫_{B(x,r)} g(|y|) dy = σ_{N−1} ∫ g(t) t^{N−1} F(cos θ(t)) dt
//!
//! over t ∈ [max(0, s−r), s+r], which avoids any N-dimensional quadrature.

use crate::error::{Error, Result};
use crate::special::{inc_beta_reg, unit_sphere_area};

/// One off-center ball integral request: center at distance `center_radius`
/// from the origin, ball radius `radius`, and the starting interval count
/// for the doubling quadrature.
#[derive(Debug, Clone, Copy)]
pub struct BallIntegralSpec {
    pub center_radius: f64,
    pub radius: f64,
    pub quadrature_nodes: usize,
}

impl BallIntegralSpec {
    pub fn new(center_radius: f64, radius: f64, quadrature_nodes: usize) -> Result<Self> {
        if !(center_radius >= 0.0) {
            return Err(Error::param("center_radius", format!("need s >= 0, got {center_radius}")));
        }
        if !(radius > 0.0) {
            return Err(Error::param("radius", format!("need r > 0, got {radius}")));
        }
        if quadrature_nodes < 4 {
            return Err(Error::param("quadrature_nodes", "need at least 4 nodes".to_string()));
        }
        Ok(Self { center_radius, radius, quadrature_nodes })
    }
}

/// Fraction of the unit-sphere surface S^{N-1} within polar angle θ of the
/// pole, parametrized by cos θ. Equals ½ I_{sin²θ}((N−1)/2, 1/2) on the
/// upper hemisphere and its reflection below.
pub fn cap_surface_fraction(dim: u32, cos_theta: f64) -> f64 {
    if cos_theta >= 1.0 {
        return 0.0;
    }
    if cos_theta <= -1.0 {
        return 1.0;
    }
    let sin_sq = (1.0 - cos_theta * cos_theta).max(0.0);
    let half = 0.5 * inc_beta_reg((dim as f64 - 1.0) / 2.0, 0.5, sin_sq);
    if cos_theta >= 0.0 {
        half
    } else {
        1.0 - half
    }
}

/// Volume of a ball of the given radius in R^N.
pub fn ball_volume(dim: u32, radius: f64) -> f64 {
    unit_sphere_area(dim) * radius.powi(dim as i32) / dim as f64
}

fn cos_opening(s: f64, r: f64, t: f64) -> f64 {
    ((s * s + t * t - r * r) / (2.0 * s * t)).clamp(-1.0, 1.0)
}

/// The 1-D reduction weight σ_{N−1} t^{N−1} F(cos θ(t)); `t` inside the
/// shell range [|s−r|, s+r] (outside, the weight is σ t^{N−1} or 0).
fn shell_weight(dim: u32, sigma: f64, s: f64, r: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    sigma * t.powi(dim as i32 - 1) * cap_surface_fraction(dim, cos_opening(s, r, t))
}

/// Composite-Simpson pass over the pieces of the reduced integrand for every
/// field, with `n` intervals per piece. The piece split at t = |s−r| keeps
/// the cap-closure kink off the quadrature interior.
fn pieces(spec: &BallIntegralSpec) -> Vec<(f64, f64, bool)> {
    let s = spec.center_radius;
    let r = spec.radius;
    if s == 0.0 {
        return vec![(0.0, r, true)];
    }
    if r > s {
        // [0, r−s] lies fully inside the ball; cap weight is 1 there.
        vec![(0.0, r - s, true), (r - s, r + s, false)]
    } else {
        vec![(s - r, s + r, false)]
    }
}

fn eval_pieces(
    dim: u32,
    sigma: f64,
    fields: &[&(dyn Fn(f64) -> f64 + Sync)],
    spec: &BallIntegralSpec,
    n: usize,
) -> Vec<f64> {
    let s = spec.center_radius;
    let r = spec.radius;
    let mut totals = vec![0.0; fields.len()];
    for &(a, b, full) in &pieces(spec) {
        if b <= a {
            continue;
        }
        let h = (b - a) / n as f64;
        for (fi, field) in fields.iter().enumerate() {
            let weight = |t: f64| -> f64 {
                if full {
                    if t <= 0.0 {
                        0.0
                    } else {
                        sigma * t.powi(dim as i32 - 1)
                    }
                } else {
                    shell_weight(dim, sigma, s, r, t)
                }
            };
            let g = |t: f64| field(t) * weight(t);
            let mut acc = g(a) + g(b);
            for i in 1..n {
                let t = a + i as f64 * h;
                acc += if i % 2 == 1 { 4.0 * g(t) } else { 2.0 * g(t) };
            }
            totals[fi] += acc * h / 3.0;
        }
    }
    totals
}

/// Integrate several radial fields over the same ball with one shared node
/// sequence, doubling intervals until every integral's relative change is
/// below `rel_tol`. Sharing the nodes makes ratios of these integrals exact
/// for constant fields.
pub fn ball_integrals(
    dim: u32,
    fields: &[&(dyn Fn(f64) -> f64 + Sync)],
    spec: &BallIntegralSpec,
    rel_tol: f64,
) -> Result<Vec<f64>> {
    let sigma = unit_sphere_area(dim);
    let mut n = spec.quadrature_nodes.max(4);
    if n % 2 == 1 {
        n += 1;
    }
    let mut prev = eval_pieces(dim, sigma, fields, spec, n);
    loop {
        n *= 2;
        let cur = eval_pieces(dim, sigma, fields, spec, n);
        let worst = prev
            .iter()
            .zip(&cur)
            .map(|(p, c)| (c - p).abs() / c.abs().max(p.abs()).max(1e-300))
            .fold(0.0f64, f64::max);
        if worst <= rel_tol {
            return Ok(cur);
        }
        if n >= 1 << 19 {
            return Err(Error::QuadratureAccuracy(format!(
                "ball integral at s={}, r={} did not converge (rel change {worst:.3e} after {n} intervals)",
                spec.center_radius, spec.radius
            )));
        }
        prev = cur;
    }
}

/// Integral of one radial field over B(x, r); relative doubling tolerance 1e-4.
pub fn ball_integral_radial(
    dim: u32,
    field: &(dyn Fn(f64) -> f64 + Sync),
    spec: &BallIntegralSpec,
) -> Result<f64> {
    Ok(ball_integrals(dim, &[field], spec, 1e-4)?[0])
}

/// Same with a caller-chosen relative tolerance.
pub fn ball_integral_with_tol(
    dim: u32,
    field: &(dyn Fn(f64) -> f64 + Sync),
    spec: &BallIntegralSpec,
    rel_tol: f64,
) -> Result<f64> {
    Ok(ball_integrals(dim, &[field], spec, rel_tol)?[0])
}

/// Fixed-node evaluation (no doubling); used by bracketing scans where the
/// sign of f − 1 is all that matters.
pub fn ball_integral_fixed(
    dim: u32,
    field: &(dyn Fn(f64) -> f64 + Sync),
    spec: &BallIntegralSpec,
    n: usize,
) -> f64 {
    let sigma = unit_sphere_area(dim);
    let n = if n % 2 == 1 { n + 1 } else { n.max(4) };
    eval_pieces(dim, sigma, &[field], spec, n)[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{OperatorParams, RadialCoefficients};
    use rand::Rng;
    use rand::SeedableRng;

    #[test]
    fn cap_fraction_basics() {
        for dim in [3u32, 4, 5, 7] {
            assert_eq!(cap_surface_fraction(dim, 1.0), 0.0);
            assert_eq!(cap_surface_fraction(dim, -1.0), 1.0);
            assert!((cap_surface_fraction(dim, 0.0) - 0.5).abs() < 1e-13);
            for &c in &[-0.9, -0.4, 0.2, 0.8] {
                let f = cap_surface_fraction(dim, c);
                assert!((0.0..=1.0).contains(&f));
                let complement = cap_surface_fraction(dim, -c);
                assert!((f + complement - 1.0).abs() < 1e-13);
            }
        }
        // N = 3 closed form: (1 - cosθ)/2
        for &c in &[-0.7, -0.2, 0.0, 0.5, 0.95] {
            assert!((cap_surface_fraction(3, c) - (1.0 - c) / 2.0).abs() < 1e-13);
        }
    }

    #[test]
    fn constant_field_gives_exact_ball_volume() {
        for (dim, s, r) in [(3u32, 0.0, 1.0), (3, 2.0, 1.0), (3, 0.5, 3.0), (4, 2.0, 0.7), (5, 10.0, 2.5)]
        {
            let spec = BallIntegralSpec::new(s, r, 16).unwrap();
            let one = |_: f64| 1.0;
            let vol = ball_integral_with_tol(dim, &one, &spec, 1e-8).unwrap();
            let exact = ball_volume(dim, r);
            let rel = (vol - exact).abs() / exact;
            assert!(rel < 1e-6, "dim={dim} s={s} r={r}: rel={rel:.3e}");
        }
    }

    #[test]
    fn concentric_case_matches_radial_quadrature() {
        let spec = BallIntegralSpec::new(0.0, 2.0, 16).unwrap();
        let field = |t: f64| (-t).exp();
        let via_ball = ball_integral_with_tol(3, &field, &spec, 1e-9).unwrap();
        let direct = crate::quad::adaptive_simpson(&|t: f64| (-t).exp() * t * t, 0.0, 2.0, 1e-12)
            .unwrap()
            * unit_sphere_area(3);
        assert!((via_ball - direct).abs() / direct.abs() < 1e-7);
    }

    #[test]
    fn monte_carlo_oracle_for_off_center_ball() {
        // (s=2, r=1, field = Ṽ, N=3, alpha=3, beta=2), agreement within
        // three standard errors of a 10^7-sample Monte Carlo estimate.
        let params = OperatorParams::new(3, 3.0, 2.0, 2.0).unwrap();
        let coeffs = params.coefficients();
        let field = move |t: f64| coeffs.normalized_potential(t);
        let spec = BallIntegralSpec::new(2.0, 1.0, 32).unwrap();
        let quadrature = ball_integral_with_tol(3, &field, &spec, 1e-8).unwrap();

        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20240811);
        let n_samples = 10_000_000usize;
        let vol = ball_volume(3, 1.0);
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for _ in 0..n_samples {
            // uniform point in the unit ball via normalized Gaussian * u^(1/3)
            let g: [f64; 3] = {
                let mut g = [0.0; 3];
                for pair in 0..2 {
                    let u1: f64 = rng.gen::<f64>().max(1e-300);
                    let u2: f64 = rng.gen();
                    let mag = (-2.0 * u1.ln()).sqrt();
                    let (s2, c2) = (2.0 * std::f64::consts::PI * u2).sin_cos();
                    if pair == 0 {
                        g[0] = mag * c2;
                        g[1] = mag * s2;
                    } else {
                        g[2] = mag * c2;
                    }
                }
                g
            };
            let norm = (g[0] * g[0] + g[1] * g[1] + g[2] * g[2]).sqrt().max(1e-300);
            let u: f64 = rng.gen::<f64>().powf(1.0 / 3.0);
            let y = [
                2.0 + u * g[0] / norm, // center at (2, 0, 0)
                u * g[1] / norm,
                u * g[2] / norm,
            ];
            let t = (y[0] * y[0] + y[1] * y[1] + y[2] * y[2]).sqrt();
            let v = field(t);
            sum += v;
            sum_sq += v * v;
        }
        let mean = sum / n_samples as f64;
        let var = (sum_sq / n_samples as f64 - mean * mean).max(0.0);
        let mc = mean * vol;
        let std_err = vol * (var / n_samples as f64).sqrt();
        assert!(
            (quadrature - mc).abs() < 3.0 * std_err,
            "quadrature {quadrature} vs MC {mc} +- {std_err}"
        );
    }

    #[test]
    fn spec_validation() {
        assert!(BallIntegralSpec::new(-1.0, 1.0, 16).is_err());
        assert!(BallIntegralSpec::new(1.0, 0.0, 16).is_err());
        assert!(BallIntegralSpec::new(1.0, 1.0, 2).is_err());
    }
}
