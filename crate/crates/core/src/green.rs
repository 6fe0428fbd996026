//! The radial Green function of Δ − Ṽ at the origin, resolvent solves
//! λu − Au = f, and the weighted-estimate ratio tables for
//! ‖|x|^γ u‖_p, ‖V u‖_p and ‖(1+r^{α−1}) u'‖_p against ‖f‖_p.

use crate::discrete::{assemble_operator, DiscreteOperator};
use crate::error::{Error, Result};
use crate::grid::{build_grid, RadialGrid};
use crate::mfunc::MEstimate;
use crate::operator::{OperatorParams, RadialCoefficients};
use crate::spectrum::GridRef;
use crate::tridiag::{gtsv, thomas_solve};
use num_complex::Complex64;

/// The operator Δ − Ṽ seen by the Green solve: unit diffusion with the
/// family's normalized potential.
struct TildeCoefficients {
    inner: crate::operator::CoefficientField,
}

impl RadialCoefficients for TildeCoefficients {
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

/// Radial Green function G(·, 0) of −(Δ − Ṽ) with the delta normalization
/// r^{N−1} G' → −1/σ_{N−1} at the origin.
#[derive(Debug, Clone)]
pub struct GreenSolution {
    pub grid_ref: GridRef,
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    /// |σ_{N−1} F_1 + 1| at the innermost interior face; bounded by the
    /// potential mass of the first cell plus discretization error.
    pub flux_normalization_residual: f64,
}

/// Solve the unit-point-load system (−K̃) G = e₁/σ_{N−1} for the operator
/// Δ − Ṽ with Dirichlet at R. Requires grading ≥ 2 so the origin
/// singularity is resolved.
pub fn green_at_origin(params: &OperatorParams, grid: &RadialGrid) -> Result<GreenSolution> {
    if grid.grading() < 2.0 {
        return Err(Error::param("grid", format!("need grading >= 2, got {}", grid.grading())));
    }
    let tilde = TildeCoefficients { inner: params.coefficients() };
    let op = assemble_operator(grid, &tilde, 0, true)?;
    let n = op.len();
    let sigma = params.sphere_area();

    // −K is a Stieltjes matrix (positive diagonal, negative off-diagonal),
    // so the unpivoted pass is stable and the solution strictly positive.
    let diag: Vec<f64> = op.stiffness_diag().iter().map(|&x| -x).collect();
    let off: Vec<f64> = op.stiffness_off().iter().map(|&x| -x).collect();
    let mut rhs = vec![0.0; n];
    rhs[0] = 1.0 / sigma;
    let values = thomas_solve(&diag, &off, &rhs)?;

    let flux = op.stiffness_off()[0] * (values[1] - values[0]);
    let flux_normalization_residual = (sigma * flux + 1.0).abs();
    Ok(GreenSolution {
        grid_ref: GridRef::of(&op),
        radii: grid.nodes().to_vec(),
        values,
        flux_normalization_residual,
    })
}

/// One fitted decay-bound constant:
/// C_k = sup over nodes of G(r) (1 + m(r) r)^k r^{N−2}.
#[derive(Debug, Clone, Copy)]
pub struct GreenBoundFit {
    pub k: f64,
    pub c_k: f64,
    pub argmax_radius: f64,
}

/// Fit the decay-bound constants for each exponent in `k_list`, using the
/// interpolated m-profile. The profile must cover the grid radii.
pub fn verify_green_bound(
    gs: &GreenSolution,
    m_profile: &MEstimate,
    k_list: &[f64],
) -> Result<Vec<GreenBoundFit>> {
    let max_profile = m_profile.radii.iter().cloned().fold(f64::MIN, f64::max);
    let max_grid = *gs.radii.last().unwrap();
    if max_profile < 0.5 * max_grid {
        return Err(Error::param(
            "m_profile",
            format!("profile reaches {max_profile}, grid needs coverage up to {max_grid}"),
        ));
    }
    let dim = gs.grid_ref.dim;
    let mut fits = Vec::with_capacity(k_list.len());
    for &k in k_list {
        let mut best = f64::NEG_INFINITY;
        let mut best_r = 0.0;
        for (&r, &g) in gs.radii.iter().zip(&gs.values) {
            let m = m_profile.interpolate(r);
            let value = g * (1.0 + m * r).powf(k) * r.powi(dim as i32 - 2);
            if value > best {
                best = value;
                best_r = r;
            }
        }
        fits.push(GreenBoundFit { k, c_k: best, argmax_radius: best_r });
    }
    Ok(fits)
}

/// Solve (λM − K)u = Mf for real λ ≥ 0 (always inside the resolvent set
/// since the spectrum is negative).
pub fn solve_resolvent(op: &DiscreteOperator, lambda: f64, f: &[f64]) -> Result<Vec<f64>> {
    if !(lambda >= 0.0) {
        return Err(Error::param(
            "lambda",
            format!("real lambda must be >= 0 (got {lambda}); use the complex solver otherwise"),
        ));
    }
    let n = op.len();
    if f.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: f.len() });
    }
    let m = op.mass();
    let diag: Vec<f64> =
        op.stiffness_diag().iter().zip(m).map(|(&k, &mi)| lambda * mi - k).collect();
    let off: Vec<f64> = op.stiffness_off().iter().map(|&k| -k).collect();
    let rhs: Vec<f64> = f.iter().zip(m).map(|(&x, &mi)| x * mi).collect();
    thomas_solve(&diag, &off, &rhs).map_err(|_| {
        let (lo, hi) = op.scaled_tridiag().nearest_eigenvalues(lambda);
        let nearest = nearest_of(lambda, lo, hi);
        Error::SpectralProximity { re: lambda, im: 0.0, nearest }
    })
}

fn nearest_of(x: f64, lo: Option<f64>, hi: Option<f64>) -> f64 {
    match (lo, hi) {
        (Some(a), Some(b)) => {
            if (x - a).abs() <= (x - b).abs() {
                a
            } else {
                b
            }
        }
        (Some(a), None) => a,
        (None, Some(b)) => b,
        (None, None) => f64::NAN,
    }
}

/// Solve (λM − K)u = Mf for complex λ off the (real, negative) spectrum.
pub fn solve_resolvent_complex(
    op: &DiscreteOperator,
    lambda: Complex64,
    f: &[f64],
) -> Result<Vec<Complex64>> {
    let n = op.len();
    if f.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: f.len() });
    }
    let tri = op.scaled_tridiag();
    let proximity_scale = 1e-12 * (1.0 + lambda.norm());
    if lambda.im.abs() < proximity_scale && lambda.re < 0.0 {
        let (lo, hi) = tri.nearest_eigenvalues(lambda.re);
        let nearest = nearest_of(lambda.re, lo, hi);
        if (lambda.re - nearest).abs() < proximity_scale {
            return Err(Error::SpectralProximity { re: lambda.re, im: lambda.im, nearest });
        }
    }
    let m = op.mass();
    let diag: Vec<Complex64> = op
        .stiffness_diag()
        .iter()
        .zip(m)
        .map(|(&k, &mi)| lambda * mi - Complex64::new(k, 0.0))
        .collect();
    let off: Vec<Complex64> =
        op.stiffness_off().iter().map(|&k| Complex64::new(-k, 0.0)).collect();
    let rhs: Vec<Complex64> =
        f.iter().zip(m).map(|(&x, &mi)| Complex64::new(x * mi, 0.0)).collect();
    gtsv(&off, &diag, &off, &rhs)
}

/// Discrete L^p(r^{N−1}dr) norm with control-volume weights.
pub fn lp_norm(grid: &RadialGrid, u: &[f64], p: f64) -> f64 {
    let mut acc = 0.0;
    for (i, &x) in u.iter().enumerate() {
        acc += grid.control_volume(i) * x.abs().powf(p);
    }
    acc.powf(1.0 / p)
}

/// Same norm with a pointwise radial weight applied to u.
pub fn weighted_lp_norm(
    grid: &RadialGrid,
    u: &[f64],
    weight: &dyn Fn(f64) -> f64,
    p: f64,
) -> f64 {
    let mut acc = 0.0;
    for (i, (&x, &r)) in u.iter().zip(grid.nodes()).enumerate() {
        acc += grid.control_volume(i) * (weight(r) * x).abs().powf(p);
    }
    acc.powf(1.0 / p)
}

/// ‖u‖ in the weighted measure μ (the M-norm); the self-adjoint frame.
pub fn mu_norm(op: &DiscreteOperator, u: &[f64]) -> f64 {
    u.iter().zip(op.mass()).map(|(x, m)| x * x * m).sum::<f64>().sqrt()
}

/// Centered differences in the interior, one-sided at both ends.
pub fn radial_gradient(grid: &RadialGrid, u: &[f64]) -> Vec<f64> {
    let r = grid.nodes();
    let n = u.len();
    let mut out = vec![0.0; n];
    if n == 1 {
        return out;
    }
    out[0] = (u[1] - u[0]) / (r[1] - r[0]);
    out[n - 1] = (u[n - 1] - u[n - 2]) / (r[n - 1] - r[n - 2]);
    for i in 1..n - 1 {
        out[i] = (u[i + 1] - u[i - 1]) / (r[i + 1] - r[i - 1]);
    }
    out
}

/// Named radial test profiles for the weighted-estimate family.
#[derive(Debug, Clone, Copy)]
pub enum TestProfile {
    Gaussian { center: f64, width: f64 },
    Oscillatory { frequency: f64, width: f64 },
    Plateau { radius: f64, power: i32 },
}

impl TestProfile {
    pub fn eval(&self, r: f64) -> f64 {
        match *self {
            TestProfile::Gaussian { center, width } => {
                let z = (r - center) / width;
                (-z * z).exp()
            }
            TestProfile::Oscillatory { frequency, width } => {
                let z = r / width;
                (frequency * r).sin() * (-z * z).exp()
            }
            TestProfile::Plateau { radius, power } => 1.0 / (1.0 + (r / radius).powi(power)),
        }
    }

    pub fn name(&self) -> String {
        match *self {
            TestProfile::Gaussian { center, width } => format!("gauss(c={center},w={width})"),
            TestProfile::Oscillatory { frequency, width } => {
                format!("osc(k={frequency},w={width})")
            }
            TestProfile::Plateau { radius, power } => format!("plateau(r={radius},m={power})"),
        }
    }
}

/// The shipped family: Gaussian bumps at shifted radii, an oscillatory
/// profile, and a plateau.
pub fn default_profile_family() -> Vec<TestProfile> {
    vec![
        TestProfile::Gaussian { center: 0.0, width: 1.0 },
        TestProfile::Gaussian { center: 3.0, width: 1.0 },
        TestProfile::Gaussian { center: 6.0, width: 1.5 },
        TestProfile::Oscillatory { frequency: 2.0, width: 4.0 },
        TestProfile::Plateau { radius: 6.0, power: 8 },
    ]
}

/// One weighted-estimate request: weight exponent γ ∈ [0, β], Lebesgue
/// index p, the profile family, and the truncation domains to compare.
#[derive(Debug, Clone)]
pub struct WeightedEstimateSpec {
    pub gamma: f64,
    pub p: f64,
    pub family: Vec<TestProfile>,
    pub domains: Vec<f64>,
}

impl WeightedEstimateSpec {
    pub fn validate(&self, params: &OperatorParams) -> Result<()> {
        if !(self.gamma >= 0.0 && self.gamma <= params.beta()) {
            return Err(Error::param(
                "gamma",
                format!("need 0 <= gamma <= beta = {}, got {}", params.beta(), self.gamma),
            ));
        }
        if !(self.p > 1.0) {
            return Err(Error::param("p", format!("need p > 1, got {}", self.p)));
        }
        if self.family.is_empty() {
            return Err(Error::param("family", "profile family must be non-empty".to_string()));
        }
        if self.domains.is_empty() || self.domains.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::param(
                "domains",
                "need an increasing non-empty domain list".to_string(),
            ));
        }
        Ok(())
    }
}

/// Sup ratios of one domain pass.
#[derive(Debug, Clone, Copy)]
pub struct WeightedRatios {
    /// ‖r^γ u‖_p / ‖f‖_p
    pub weight: f64,
    /// ‖V u‖_p / ‖A u‖_p (Au = −f for the λ = 0 resolvent)
    pub potential: f64,
    /// ‖(1+r^{α−1}) u'‖_p / (‖A u‖_p + ‖u‖_p)
    pub gradient: f64,
}

#[derive(Debug, Clone)]
pub struct WeightedEstimateReport {
    pub gamma: f64,
    pub p: f64,
    pub domains: Vec<f64>,
    /// (profile name, domain radius, ratios) per run.
    pub rows: Vec<(String, f64, WeightedRatios)>,
    /// Sup over the family per domain.
    pub per_domain: Vec<WeightedRatios>,
    /// Relative growth of each sup ratio from the first to the last domain.
    pub growth: WeightedRatios,
}

/// Solve u = (−A)⁻¹ f for every family member on every domain and tabulate
/// the three estimate ratios. Node counts scale with the domain radius so
/// resolution stays comparable under domain doubling.
pub fn weighted_estimate_report(
    params: &OperatorParams,
    spec: &WeightedEstimateSpec,
    base_n: usize,
    grading: f64,
) -> Result<WeightedEstimateReport> {
    spec.validate(params)?;
    let coeffs = params.coefficients();
    let alpha = params.alpha();
    let gamma = spec.gamma;
    let p = spec.p;
    let mut rows = Vec::new();
    let mut per_domain = Vec::new();
    let r0 = spec.domains[0];

    for &radius in &spec.domains {
        let n = ((base_n as f64) * radius / r0).round() as usize;
        let grid = build_grid(params.dim(), radius, n, grading)?;
        let op = assemble_operator(&grid, &coeffs, 0, true)?;
        let mut sup = WeightedRatios { weight: 0.0, potential: 0.0, gradient: 0.0 };
        for profile in &spec.family {
            let f: Vec<f64> = grid.nodes().iter().map(|&r| profile.eval(r)).collect();
            let u = solve_resolvent(&op, 0.0, &f)?;
            let f_norm = lp_norm(&grid, &f, p);
            let u_norm = lp_norm(&grid, &u, p);
            let weight_norm = weighted_lp_norm(&grid, &u, &|r| r.powf(gamma), p);
            let potential_norm = weighted_lp_norm(&grid, &u, &|r| coeffs.potential(r), p);
            let du = radial_gradient(&grid, &u);
            let grad_norm =
                weighted_lp_norm(&grid, &du, &|r| 1.0 + r.powf(alpha - 1.0), p);
            let ratios = WeightedRatios {
                weight: weight_norm / f_norm,
                potential: potential_norm / f_norm,
                gradient: grad_norm / (f_norm + u_norm),
            };
            sup.weight = sup.weight.max(ratios.weight);
            sup.potential = sup.potential.max(ratios.potential);
            sup.gradient = sup.gradient.max(ratios.gradient);
            rows.push((profile.name(), radius, ratios));
        }
        per_domain.push(sup);
    }

    let first = per_domain.first().unwrap();
    let last = per_domain.last().unwrap();
    let growth = WeightedRatios {
        weight: last.weight / first.weight - 1.0,
        potential: last.potential / first.potential - 1.0,
        gradient: last.gradient / first.gradient - 1.0,
    };
    Ok(WeightedEstimateReport {
        gamma,
        p,
        domains: spec.domains.clone(),
        rows,
        per_domain,
        growth,
    })
}
