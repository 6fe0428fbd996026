//! Generalized symmetric eigensolves K ψ = λ M ψ per angular channel,
//! ground-state extraction, and the discrete surrogate of spectral
//! accumulation at −∞.

use crate::discrete::DiscreteOperator;
use crate::error::{Error, Result};
use crate::special::unit_sphere_area;

/// Provenance of a discretization, carried with spectral data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRef {
    pub dim: u32,
    pub radius: f64,
    pub n: usize,
    pub grading: f64,
}

impl GridRef {
    pub fn of(op: &DiscreteOperator) -> Self {
        let g = op.grid();
        Self { dim: g.dim(), radius: g.radius(), n: g.len(), grading: g.grading() }
    }
}

/// Eigenpairs of one angular channel, eigenvalues descending and
/// eigenvectors M-orthonormal.
#[derive(Debug, Clone)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Vec<f64>>,
    /// ‖Ãz − λz‖₂ per pair in the mass-scaled frame (equals the
    /// M^{-1/2}-weighted residual of K ψ = λ M ψ).
    pub residuals: Vec<f64>,
    pub ell: u32,
    pub grid_ref: GridRef,
}

impl SpectrumResult {
    /// |ψᵢᵀ M ψⱼ − δᵢⱼ| maximized over all pairs.
    pub fn orthonormality_defect(&self, op: &DiscreteOperator) -> f64 {
        let m = op.mass();
        let mut worst: f64 = 0.0;
        for (i, a) in self.eigenvectors.iter().enumerate() {
            for (j, b) in self.eigenvectors.iter().enumerate() {
                let dot: f64 = a.iter().zip(b).zip(m).map(|((x, y), w)| x * y * w).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }
}

/// The `k` largest eigenpairs of (K, M). M is diagonal, so the reduction to
/// a standard symmetric tridiagonal problem is exact; eigenvectors return in
/// the ψ = M^{-1/2} z frame and are M-orthonormal.
pub fn solve_spectrum(op: &DiscreteOperator, k: usize) -> Result<SpectrumResult> {
    let n = op.len();
    if k == 0 || k > n {
        return Err(Error::EigenSolve(format!("requested {k} eigenpairs of a {n}-point channel")));
    }
    let tri = op.scaled_tridiag();
    let eigenvalues = tri.top_eigenvalues(k)?;

    let mut z_basis: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut residuals = Vec::with_capacity(k);
    let mut polished = Vec::with_capacity(k);
    for &lambda in &eigenvalues {
        let (z, rho, res) = tri.inverse_iteration(lambda, &z_basis)?;
        polished.push(rho);
        residuals.push(res);
        z_basis.push(z);
    }

    let inv_sqrt_m: Vec<f64> = op.mass().iter().map(|&m| 1.0 / m.sqrt()).collect();
    let eigenvectors: Vec<Vec<f64>> = z_basis
        .into_iter()
        .map(|z| z.iter().zip(&inv_sqrt_m).map(|(zi, s)| zi * s).collect())
        .collect();

    Ok(SpectrumResult {
        eigenvalues: polished,
        eigenvectors,
        residuals,
        ell: op.ell(),
        grid_ref: GridRef::of(op),
    })
}

/// All generalized eigenvalues of (K, M), ascending.
pub fn all_eigenvalues(op: &DiscreteOperator) -> Vec<f64> {
    op.scaled_tridiag().all_eigenvalues()
}

/// Ground pair of the ℓ = 0 channel: strictly positive eigenvector
/// (M-norm 1, mass-weighted mean positive) and the simplicity gap.
#[derive(Debug, Clone)]
pub struct GroundState {
    pub lambda0: f64,
    pub psi: Vec<f64>,
    pub simplicity_gap: f64,
}

pub fn ground_state(op: &DiscreteOperator) -> Result<GroundState> {
    if op.ell() != 0 {
        return Err(Error::EigenSolve(format!(
            "ground state lives in the ell = 0 channel, got ell = {}",
            op.ell()
        )));
    }
    let tri = op.scaled_tridiag();
    let n = op.len();
    let lambda0 = tri.eigenvalue_by_index(n - 1)?;
    let lambda1 = tri.eigenvalue_by_index(n - 2)?;
    let gap = lambda0 - lambda1;
    let threshold = 1e-10 * lambda0.abs();
    if gap < threshold {
        return Err(Error::DegenerateGround { gap, threshold });
    }

    let (z, rho, _res) = tri.ground_vector_positive(lambda0)?;
    let inv_sqrt_m: Vec<f64> = op.mass().iter().map(|&m| 1.0 / m.sqrt()).collect();
    let mut psi: Vec<f64> = z.iter().zip(&inv_sqrt_m).map(|(zi, s)| zi * s).collect();

    // sign: mass-weighted mean positive
    let mean: f64 = psi.iter().zip(op.mass()).map(|(x, m)| x * m).sum();
    if mean < 0.0 {
        for x in psi.iter_mut() {
            *x = -*x;
        }
    }
    if psi.iter().any(|&x| !(x > 0.0)) {
        return Err(Error::EigenSolve("ground eigenvector is not strictly positive".into()));
    }
    Ok(GroundState { lambda0: rho, psi, simplicity_gap: gap })
}

/// Discrete surrogate of "the spectrum accumulates at −∞": consecutive gaps
/// of the computed levels, which must stay bounded away from zero.
#[derive(Debug, Clone)]
pub struct AccumulationReport {
    /// λ_k − λ_{k+1} for the computed (descending) levels.
    pub gaps: Vec<f64>,
    pub strictly_decreasing: bool,
    pub min_gap: f64,
}

pub fn accumulation_check(spectrum: &SpectrumResult) -> AccumulationReport {
    let gaps: Vec<f64> =
        spectrum.eigenvalues.windows(2).map(|w| w[0] - w[1]).collect();
    let strictly_decreasing = gaps.iter().all(|&g| g > 0.0);
    let min_gap = gaps.iter().cloned().fold(f64::INFINITY, f64::min);
    AccumulationReport { gaps, strictly_decreasing, min_gap }
}

/// Multiplicity of the angular channel ℓ in dimension N:
/// (2ℓ+N−2)(ℓ+N−3)! / (ℓ!(N−2)!), i.e. 1 for ℓ = 0 and 2ℓ+1 when N = 3.
pub fn angular_degeneracy(dim: u32, ell: u32) -> f64 {
    if ell == 0 {
        return 1.0;
    }
    let n = dim as f64;
    let l = ell as f64;
    // equivalently (2ℓ+N−2)/(N−2) · C(ℓ+N−3, N−3)
    let mut binom = 1.0;
    for j in 1..=(dim.saturating_sub(3)) {
        binom *= (l + j as f64) / j as f64;
    }
    (2.0 * l + n - 2.0) / (n - 2.0) * binom
}

/// Count sign changes of a vector, ignoring entries below `floor_rel` times
/// the max magnitude (eigenvector tails sit at the solver noise floor).
pub fn sign_changes(v: &[f64], floor_rel: f64) -> usize {
    let max = v.iter().map(|x| x.abs()).fold(0.0f64, f64::max);
    let floor = floor_rel * max;
    let mut last: Option<f64> = None;
    let mut changes = 0;
    for &x in v {
        if x.abs() <= floor {
            continue;
        }
        if let Some(prev) = last {
            if prev.signum() != x.signum() {
                changes += 1;
            }
        }
        last = Some(x);
    }
    changes
}

/// Heat-kernel diagonal sup via the multi-channel eigen-expansion lives in
/// `semigroup`; this helper exposes the per-channel normalization it uses.
pub fn kernel_channel_weight(dim: u32, ell: u32) -> f64 {
    angular_degeneracy(dim, ell) / unit_sphere_area(dim)
}
