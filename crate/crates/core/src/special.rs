//! Scalar special functions used by the radial geometry: log-gamma, the
//! regularized incomplete beta function, and unit-sphere surface areas.
//!
//! The incomplete beta is evaluated by the standard Lentz continued fraction
//! and is accurate to ~1e-14; the spherical-cap reduction relies on this.

use crate::error::{Error, Result};

/// Natural log of the gamma function, Lanczos approximation (g = 7, 9 terms).
pub fn ln_gamma(x: f64) -> f64 {
    const COEFFS: [f64; 8] = [
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    assert!(x > 0.0, "ln_gamma requires a positive argument");
    if x < 0.5 {
        // reflection: Γ(x)Γ(1−x) = π / sin(πx)
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = 0.999_999_999_999_809_93;
    for (i, &c) in COEFFS.iter().enumerate() {
        acc += c / (x + (i + 1) as f64);
    }
    let t = x + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Continued fraction for the incomplete beta (Lentz's method).
fn beta_cf(a: f64, b: f64, x: f64) -> Result<f64> {
    const MAX_ITER: usize = 300;
    const EPS: f64 = 1e-15;
    const TINY: f64 = 1e-300;

    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            return Ok(h);
        }
    }
    Err(Error::QuadratureAccuracy(format!(
        "incomplete beta continued fraction stalled at a={a}, b={b}, x={x}"
    )))
}

/// Regularized incomplete beta function I_x(a, b).
pub fn inc_beta_reg(a: f64, b: f64, x: f64) -> f64 {
    assert!(a > 0.0 && b > 0.0, "inc_beta_reg requires positive shape parameters");
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
    let front = ln_front.exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_cf(a, b, x).expect("continued fraction convergence") / a
    } else {
        1.0 - front * beta_cf(b, a, 1.0 - x).expect("continued fraction convergence") / b
    }
}

/// Surface area of the unit sphere S^{N-1} in R^N: 2 π^{N/2} / Γ(N/2).
pub fn unit_sphere_area(dim: u32) -> f64 {
    let half = dim as f64 / 2.0;
    (2.0f64.ln() + half * std::f64::consts::PI.ln() - ln_gamma(half)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn ln_gamma_known_values() {
        assert!((ln_gamma(1.0)).abs() < 1e-13);
        assert!((ln_gamma(2.0)).abs() < 1e-13);
        assert!((ln_gamma(5.0) - 24.0f64.ln()).abs() < 1e-12);
        // Γ(1/2) = √π
        assert!((ln_gamma(0.5) - 0.5 * PI.ln()).abs() < 1e-12);
        // Γ(3/2) = √π / 2
        assert!((ln_gamma(1.5) - (PI.sqrt() / 2.0).ln()).abs() < 1e-12);
    }

    #[test]
    fn sphere_areas_in_low_dimensions() {
        assert!((unit_sphere_area(2) - 2.0 * PI).abs() < 1e-12);
        assert!((unit_sphere_area(3) - 4.0 * PI).abs() < 1e-11);
        assert!((unit_sphere_area(4) - 2.0 * PI * PI).abs() < 1e-11);
        // σ_4 = 8π²/3
        assert!((unit_sphere_area(5) - 8.0 * PI * PI / 3.0).abs() < 1e-10);
    }

    #[test]
    fn inc_beta_endpoints_and_symmetry() {
        assert_eq!(inc_beta_reg(1.3, 2.7, 0.0), 0.0);
        assert_eq!(inc_beta_reg(1.3, 2.7, 1.0), 1.0);
        // I_x(a,b) = 1 - I_{1-x}(b,a)
        for &(a, b, x) in &[(1.0, 0.5, 0.3), (2.5, 3.5, 0.62), (0.5, 0.5, 0.11)] {
            let lhs = inc_beta_reg(a, b, x);
            let rhs = 1.0 - inc_beta_reg(b, a, 1.0 - x);
            assert!((lhs - rhs).abs() < 1e-13, "symmetry failed at ({a},{b},{x})");
        }
    }

    #[test]
    fn inc_beta_closed_forms() {
        // I_x(1, b) = 1 - (1-x)^b
        for &x in &[0.05, 0.4, 0.9] {
            let b = 2.25;
            let expect = 1.0 - (1.0f64 - x).powf(b);
            assert!((inc_beta_reg(1.0, b, x) - expect).abs() < 1e-13);
        }
        // I_x(1/2, 1/2) = (2/π) asin(√x)
        for &x in &[0.1f64, 0.5, 0.77] {
            let expect = 2.0 / PI * x.sqrt().asin();
            assert!((inc_beta_reg(0.5, 0.5, x) - expect).abs() < 1e-12);
        }
    }
}
