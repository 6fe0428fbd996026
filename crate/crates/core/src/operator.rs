//! The operator model: parameters of A = (1+r^α)Δ − r^β, its closed-form
//! coefficient functions, the Lyapunov-constant computation for φ = 1 + r^γ,
//! and the reverse Hölder classification of the normalized potential
//! Ṽ = r^β / (1 + r^α).

use crate::error::{Error, Result};
use crate::quad::golden_max;
use crate::special::unit_sphere_area;
use std::fmt;

/// Parameter quadruple (N, α, β, p); the standing hypotheses are
/// N ≥ 3, α > 2, β > α − 2, 1 < p < ∞ and construction rejects violations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorParams {
    dim: u32,
    alpha: f64,
    beta: f64,
    p: f64,
}

impl OperatorParams {
    pub fn new(dim: u32, alpha: f64, beta: f64, p: f64) -> Result<Self> {
        if dim < 3 {
            return Err(Error::param("dim", format!("need N >= 3, got {dim}")));
        }
        if !alpha.is_finite() || alpha <= 2.0 {
            return Err(Error::param("alpha", format!("need alpha > 2, got {alpha}")));
        }
        if !beta.is_finite() || beta <= alpha - 2.0 {
            return Err(Error::param(
                "beta",
                format!("need beta > alpha - 2 = {}, got {beta}", alpha - 2.0),
            ));
        }
        if !p.is_finite() || p <= 1.0 {
            return Err(Error::param("p", format!("need 1 < p < inf, got {p}")));
        }
        Ok(Self { dim, alpha, beta, p })
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn lebesgue_index(&self) -> f64 {
        self.p
    }

    /// Surface area σ_{N−1} of the unit sphere in this dimension.
    pub fn sphere_area(&self) -> f64 {
        unit_sphere_area(self.dim)
    }

    pub fn coefficients(&self) -> CoefficientField {
        CoefficientField { alpha: self.alpha, beta: self.beta }
    }

    /// Same parameters with a different Lebesgue index.
    pub fn with_lebesgue_index(&self, p: f64) -> Result<Self> {
        Self::new(self.dim, self.alpha, self.beta, p)
    }
}

/// Radial coefficient source for the divergence-form discretization.
/// `normalized_potential` is Ṽ = V / a; `inverse_diffusion` is q = 1 / a.
pub trait RadialCoefficients: Sync {
    fn diffusion(&self, r: f64) -> f64;
    fn potential(&self, r: f64) -> f64;

    fn normalized_potential(&self, r: f64) -> f64 {
        self.potential(r) * self.inverse_diffusion(r)
    }

    fn inverse_diffusion(&self, r: f64) -> f64 {
        1.0 / self.diffusion(r)
    }
}

/// The two-exponent family a = 1 + r^α, V = r^β.
#[derive(Debug, Clone, Copy)]
pub struct CoefficientField {
    alpha: f64,
    beta: f64,
}

impl CoefficientField {
    /// All four closed-form values (a, V, Ṽ, q) at radius `r`.
    /// Ṽ is computed as V·q so that the identity holds to machine precision.
    pub fn eval(&self, r: f64) -> Result<(f64, f64, f64, f64)> {
        if !(r >= 0.0) {
            return Err(Error::Domain(format!("coefficients need r >= 0, got {r}")));
        }
        let a = 1.0 + r.powf(self.alpha);
        let v = r.powf(self.beta);
        let q = 1.0 / a;
        Ok((a, v, v * q, q))
    }
}

impl RadialCoefficients for CoefficientField {
    fn diffusion(&self, r: f64) -> f64 {
        1.0 + r.powf(self.alpha)
    }

    fn potential(&self, r: f64) -> f64 {
        r.powf(self.beta)
    }

    fn normalized_potential(&self, r: f64) -> f64 {
        r.powf(self.beta) / (1.0 + r.powf(self.alpha))
    }

    fn inverse_diffusion(&self, r: f64) -> f64 {
        1.0 / (1.0 + r.powf(self.alpha))
    }
}

/// Evaluate (a, V, Ṽ, q) at radius `r`.
pub fn eval_coefficients(params: &OperatorParams, r: f64) -> Result<(f64, f64, f64, f64)> {
    params.coefficients().eval(r)
}

/// Result of the Lyapunov-constant computation for φ = 1 + r^γ.
#[derive(Debug, Clone, Copy)]
pub struct LyapunovProbe {
    pub gamma: f64,
    /// Smallest C ≥ 0 with Aφ ≤ Cφ, i.e. max(0, sup_r Aφ/φ).
    pub constant: f64,
    /// Radius attaining the supremum (0 when the supremum is nonpositive).
    pub r_star: f64,
}

/// The pointwise ratio (Aφ)(r) / φ(r) with φ = 1 + r^γ:
///   [γ(N+γ−2)(1+r^α) r^{γ−2} − (1+r^γ) r^β] / (1+r^γ).
pub fn lyapunov_ratio(params: &OperatorParams, gamma: f64, r: f64) -> f64 {
    if r == 0.0 {
        return 0.0;
    }
    let n = params.dim as f64;
    let a = 1.0 + r.powf(params.alpha);
    let phi = 1.0 + r.powf(gamma);
    let laplace_part = gamma * (n + gamma - 2.0) * a * r.powf(gamma - 2.0);
    laplace_part / phi - r.powf(params.beta)
}

/// Compute the Lyapunov constant by a log-spaced scan plus golden-section
/// refinement. The scan window is (0, 1e3], extended by decades until the
/// ratio is negative at the right endpoint (guaranteed since β > α − 2).
pub fn lyapunov_constant(params: &OperatorParams, gamma: f64) -> Result<LyapunovProbe> {
    if !(gamma > 2.0) || !gamma.is_finite() {
        return Err(Error::param("gamma", format!("need gamma > 2, got {gamma}")));
    }
    let ratio = |r: f64| lyapunov_ratio(params, gamma, r);

    let mut hi = 1e3;
    while ratio(hi) >= 0.0 {
        hi *= 10.0;
        if hi > 1e9 {
            return Err(Error::Domain(
                "Lyapunov ratio did not turn negative below r = 1e9".into(),
            ));
        }
    }

    let lo = 1e-6f64;
    let count = 8192;
    let log_lo = lo.ln();
    let step = (hi.ln() - log_lo) / (count - 1) as f64;
    let mut best_i = 0;
    let mut best = f64::NEG_INFINITY;
    let mut grid = Vec::with_capacity(count);
    for i in 0..count {
        let r = (log_lo + i as f64 * step).exp();
        let v = ratio(r);
        grid.push(r);
        if v > best {
            best = v;
            best_i = i;
        }
    }

    if best <= 0.0 {
        return Ok(LyapunovProbe { gamma, constant: 0.0, r_star: 0.0 });
    }

    let a = if best_i == 0 { grid[0] * 0.5 } else { grid[best_i - 1] };
    let b = if best_i + 1 == count { grid[count - 1] } else { grid[best_i + 1] };
    let (r_star, c) = golden_max(&ratio, a, b, 120);
    Ok(LyapunovProbe { gamma, constant: c.max(0.0), r_star })
}

/// Reverse Hölder classes with a sufficient-condition verdict.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RhClass {
    /// B_∞: sufficient when β − α ≥ 0.
    BInfinity,
    /// B_{N/2}: sufficient when β − α > −2.
    BHalfDim,
    /// B_N: sufficient when β − α > −1.
    BDim,
    /// B_q for a caller-supplied q: sufficient when β − α > −N/q.
    BQ(f64),
}

impl fmt::Display for RhClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RhClass::BInfinity => write!(f, "B_inf"),
            RhClass::BHalfDim => write!(f, "B_{{N/2}}"),
            RhClass::BDim => write!(f, "B_N"),
            RhClass::BQ(q) => write!(f, "B_{{{q}}}"),
        }
    }
}

/// Verdict for one class; `holds = false` means "not implied" (the condition
/// is sufficient only, so failure never certifies non-membership).
#[derive(Debug, Clone)]
pub struct RhVerdict {
    pub class: RhClass,
    pub holds: bool,
    pub reason: String,
}

/// Membership verdicts for Ṽ = r^β/(1+r^α) in the reverse Hölder classes.
/// Pass `q` to also test B_q for one finite exponent.
pub fn classify_reverse_holder(params: &OperatorParams, q: Option<f64>) -> Vec<RhVerdict> {
    let d = params.beta - params.alpha;
    let n = params.dim as f64;
    let mut verdicts = Vec::new();

    let entry = |class: RhClass, holds: bool, cond: String| RhVerdict {
        class,
        holds,
        reason: if holds {
            format!("beta - alpha = {d:.6} satisfies {cond}")
        } else {
            format!("not implied: beta - alpha = {d:.6} fails {cond}")
        },
    };

    verdicts.push(entry(RhClass::BInfinity, d >= 0.0, "beta - alpha >= 0".into()));
    if let Some(q) = q {
        let thresh = -n / q;
        verdicts.push(entry(
            RhClass::BQ(q),
            d > thresh,
            format!("beta - alpha > -N/q = {thresh:.6}"),
        ));
    }
    verdicts.push(entry(RhClass::BHalfDim, d > -2.0, "beta - alpha > -2".into()));
    verdicts.push(entry(RhClass::BDim, d > -1.0, "beta - alpha > -1".into()));
    verdicts
}
