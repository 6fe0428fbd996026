//! Finite-volume assembly of the radial operator per angular channel.
//!
//! The operator A u = a(Δ − ℓ(ℓ+N−2)/r² − Ṽ) u is symmetric in the weighted
//! measure dμ = r^{N−1} dr / a(r), so the discretization produces a
//! symmetric tridiagonal stiffness K (face fluxes r^{N−1} u' plus a
//! nonpositive diagonal potential term) and a positive diagonal mass M with
//! M_ii = ∫_cell r^{N−1}/a dr. Generalized eigenvalues of (K, M) are then
//! real by construction.

use crate::error::{Error, Result};
use crate::grid::{segment_volume, RadialGrid};
use crate::operator::RadialCoefficients;
use crate::quad::adaptive_simpson;
use crate::tridiag::SymTridiag;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryKind {
    /// Omit the face flux (r^{N−1} u' = 0).
    ZeroFlux,
    /// Homogeneous Dirichlet value just outside the face.
    Dirichlet,
}

/// Symmetric stiffness/mass pair for one angular channel.
#[derive(Debug, Clone)]
pub struct DiscreteOperator {
    grid: RadialGrid,
    ell: u32,
    boundary: (BoundaryKind, BoundaryKind),
    includes_potential: bool,
    k_diag: Vec<f64>,
    k_off: Vec<f64>,
    m_diag: Vec<f64>,
}

impl DiscreteOperator {
    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn boundary(&self) -> (BoundaryKind, BoundaryKind) {
        self.boundary
    }

    pub fn includes_potential(&self) -> bool {
        self.includes_potential
    }

    pub fn len(&self) -> usize {
        self.k_diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.k_diag.is_empty()
    }

    pub fn stiffness_diag(&self) -> &[f64] {
        &self.k_diag
    }

    pub fn stiffness_off(&self) -> &[f64] {
        &self.k_off
    }

    pub fn mass(&self) -> &[f64] {
        &self.m_diag
    }

    /// K u.
    pub fn apply_stiffness(&self, u: &[f64]) -> Result<Vec<f64>> {
        let n = self.len();
        if u.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: u.len() });
        }
        let mut out = vec![0.0; n];
        for i in 0..n {
            let mut acc = self.k_diag[i] * u[i];
            if i > 0 {
                acc += self.k_off[i - 1] * u[i - 1];
            }
            if i + 1 < n {
                acc += self.k_off[i] * u[i + 1];
            }
            out[i] = acc;
        }
        Ok(out)
    }

    /// The discrete action of the operator: M⁻¹ K u.
    pub fn apply(&self, u: &[f64]) -> Result<Vec<f64>> {
        let mut out = self.apply_stiffness(u)?;
        for (o, m) in out.iter_mut().zip(&self.m_diag) {
            *o /= m;
        }
        Ok(out)
    }

    /// Generalized Rayleigh quotient uᵀKu / uᵀMu.
    pub fn rayleigh_quotient(&self, u: &[f64]) -> Result<f64> {
        let ku = self.apply_stiffness(u)?;
        let num: f64 = u.iter().zip(&ku).map(|(a, b)| a * b).sum();
        let den: f64 = u.iter().zip(&self.m_diag).map(|(a, m)| a * a * m).sum();
        Ok(num / den)
    }

    /// The M^{-1/2} K M^{-1/2} reduction to a standard symmetric
    /// tridiagonal problem; eigenvectors map back by ψ = M^{-1/2} z, which
    /// keeps them M-orthonormal.
    pub fn scaled_tridiag(&self) -> SymTridiag {
        let n = self.len();
        let inv_sqrt: Vec<f64> = self.m_diag.iter().map(|&m| 1.0 / m.sqrt()).collect();
        let diag: Vec<f64> = (0..n).map(|i| self.k_diag[i] * inv_sqrt[i] * inv_sqrt[i]).collect();
        let off: Vec<f64> =
            (0..n - 1).map(|i| self.k_off[i] * inv_sqrt[i] * inv_sqrt[i + 1]).collect();
        SymTridiag { diag, off }
    }
}

/// Assemble (K, M) on the given grid; outer boundary is Dirichlet at R,
/// inner boundary zero-flux for ℓ = 0 and Dirichlet at 0 for ℓ ≥ 1.
pub fn assemble_operator(
    grid: &RadialGrid,
    coeffs: &dyn RadialCoefficients,
    ell: u32,
    include_potential: bool,
) -> Result<DiscreteOperator> {
    assemble_operator_with_outer(grid, coeffs, ell, include_potential, BoundaryKind::Dirichlet)
}

/// Assembly variant with a caller-chosen outer boundary (zero-flux is used
/// by conservation checks).
pub fn assemble_operator_with_outer(
    grid: &RadialGrid,
    coeffs: &dyn RadialCoefficients,
    ell: u32,
    include_potential: bool,
    outer: BoundaryKind,
) -> Result<DiscreteOperator> {
    let n = grid.len();
    let nodes = grid.nodes();
    let dim = grid.dim();
    let radius = grid.radius();
    let inner = if ell == 0 { BoundaryKind::ZeroFlux } else { BoundaryKind::Dirichlet };

    // Exact two-point flux conductance between radii a < b:
    // c = 1 / ∫_a^b t^{1-N} dt = (N-2) / (a^{2-N} - b^{2-N}),
    // which reproduces piecewise-r^{2-N} solutions (and hence the Newtonian
    // kernel) exactly at the nodes. The integral diverges at a = 0, so the
    // inner face carries no flux in either boundary mode; for ℓ ≥ 1 the
    // centrifugal barrier enforces the Dirichlet behaviour at the origin.
    let conductance = |a: f64, b: f64| -> f64 {
        if a <= 0.0 {
            return 0.0;
        }
        let e = 2 - dim as i32;
        (dim as f64 - 2.0) / (a.powi(e) - b.powi(e))
    };
    let mut cond = vec![0.0; n + 1];
    cond[0] = 0.0;
    for i in 1..n {
        cond[i] = conductance(nodes[i - 1], nodes[i]);
    }
    cond[n] = match outer {
        BoundaryKind::ZeroFlux => 0.0,
        BoundaryKind::Dirichlet => conductance(nodes[n - 1], radius),
    };

    let centrifugal = (ell * (ell + dim - 2)) as f64;
    let mut k_diag = vec![0.0; n];
    let mut k_off = vec![0.0; n - 1];
    let mut m_diag = vec![0.0; n];

    for i in 0..n {
        // Control volume of node i; the first cell extends to r = 0 since
        // the inner face never carries flux.
        let lo = if i == 0 { 0.0 } else { grid.face(i) };
        let hi = grid.face(i + 1);
        let r_i = nodes[i];

        let leb = segment_volume(dim, lo, hi);
        let mut pot = 0.0;
        if include_potential {
            let w = coeffs.normalized_potential(r_i)
                + if ell > 0 { centrifugal / (r_i * r_i) } else { 0.0 };
            pot = w * leb;
        }
        k_diag[i] = -(cond[i] + cond[i + 1]) - pot;
        if i + 1 < n {
            k_off[i] = cond[i + 1];
        }

        let integrand = |r: f64| r.powi(dim as i32 - 1) * coeffs.inverse_diffusion(r);
        let scale = leb.max(1e-300);
        let m = adaptive_simpson(&integrand, lo, hi, 1e-11 * scale).map_err(|e| {
            Error::QuadratureAccuracy(format!("mass integral on cell {i}: {e}"))
        })?;
        if !(m > 0.0) {
            return Err(Error::QuadratureAccuracy(format!(
                "nonpositive mass entry {m} on cell {i}"
            )));
        }
        m_diag[i] = m;
    }

    Ok(DiscreteOperator {
        grid: grid.clone(),
        ell,
        boundary: (inner, outer),
        includes_potential: include_potential,
        k_diag,
        k_off,
        m_diag,
    })
}

/// Free-function form of `DiscreteOperator::apply`.
pub fn apply_operator(op: &DiscreteOperator, u: &[f64]) -> Result<Vec<f64>> {
    op.apply(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::build_grid;
    use crate::operator::OperatorParams;
    use crate::validation;
    use crate::xcheck;

    #[test]
    fn stiffness_is_symmetric_by_construction() {
        // The assembly stores one off-diagonal array, so K = Kᵀ holds
        // exactly; verify the quadratic form matches the matvec.
        let grid = build_grid(3, 10.0, 50, 2.0).unwrap();
        let p = OperatorParams::new(3, 3.0, 2.0, 2.0).unwrap();
        let op = assemble_operator(&grid, &p.coefficients(), 0, true).unwrap();
        let u: Vec<f64> = (0..50).map(|i| ((i * 37 + 11) % 19) as f64 / 19.0 - 0.4).collect();
        let v: Vec<f64> = (0..50).map(|i| ((i * 53 + 5) % 23) as f64 / 23.0 - 0.5).collect();
        let ku = op.apply_stiffness(&u).unwrap();
        let kv = op.apply_stiffness(&v).unwrap();
        let vku: f64 = v.iter().zip(&ku).map(|(a, b)| a * b).sum();
        let ukv: f64 = u.iter().zip(&kv).map(|(a, b)| a * b).sum();
        assert!((vku - ukv).abs() <= 1e-12 * vku.abs().max(ukv.abs()));
    }

    #[test]
    fn laplacian_validation_mode_reproduces_ball_eigenvalue() {
        // a ≡ 1, V ≡ 0, N=3, ℓ=0: lowest Dirichlet eigenvalue on [0,R] is
        // −π²/R² (eigenfunction sin(πr/R)/r has zero flux at the origin).
        let radius = 5.0;
        let exact = -(std::f64::consts::PI / radius).powi(2);
        let mut errs = Vec::new();
        for n in [200usize, 400] {
            let grid = build_grid(3, radius, n, 1.0).unwrap();
            let op = assemble_operator(&grid, &validation::laplacian(), 0, true).unwrap();
            let tri = op.scaled_tridiag();
            let top = tri.top_eigenvalues(1).unwrap()[0];
            errs.push((top - exact).abs());
        }
        assert!(errs[0] < 1e-3);
        // O(n^-2): doubling n shrinks the error by ~4.
        let ratio = errs[0] / errs[1];
        assert!(ratio > 3.0 && ratio < 5.0, "convergence ratio {ratio}");
    }

    #[test]
    fn rayleigh_quotient_matches_quadrature_oracle() {
        // ψ = exp(−r) on (N=3, α=3, β=2, ℓ=0, R=20, n=400): discrete
        // quotient within 2% of the adaptive-quadrature quotient.
        let p = OperatorParams::new(3, 3.0, 2.0, 2.0).unwrap();
        let grid = build_grid(3, 20.0, 400, 2.0).unwrap();
        let op = assemble_operator(&grid, &p.coefficients(), 0, true).unwrap();
        let psi: Vec<f64> = grid.nodes().iter().map(|&r| (-r).exp()).collect();
        let discrete = op.rayleigh_quotient(&psi).unwrap();
        assert!(discrete < 0.0);
        let oracle = xcheck::rayleigh_quotient_quadrature(
            &p.coefficients(),
            3,
            20.0,
            &|r| (-r).exp(),
            &|r| -(-r).exp(),
        )
        .unwrap();
        let rel = (discrete - oracle).abs() / oracle.abs();
        assert!(rel < 0.02, "discrete {discrete} vs oracle {oracle} (rel {rel:.3e})");
    }

    #[test]
    fn apply_basics() {
        let grid = build_grid(3, 8.0, 40, 2.0).unwrap();
        let p = OperatorParams::new(3, 3.0, 2.0, 2.0).unwrap();
        let op = assemble_operator(&grid, &p.coefficients(), 0, false).unwrap();

        // zero in, zero out
        let z = op.apply(&vec![0.0; 40]).unwrap();
        assert!(z.iter().all(|&x| x == 0.0));

        // constants are annihilated away from the Dirichlet boundary
        let ones = vec![1.0; 40];
        let au = op.apply(&ones).unwrap();
        for (i, &v) in au.iter().enumerate().take(39) {
            assert!(
                v.abs() < 1e-10,
                "interior row {i} not annihilated: {v}"
            );
        }
        assert!(au[39] < 0.0);

        // dimension mismatch
        assert!(op.apply(&vec![1.0; 17]).is_err());
    }

    #[test]
    fn rayleigh_quotient_nonpositive_with_potential() {
        let grid = build_grid(3, 15.0, 120, 2.0).unwrap();
        let p = OperatorParams::new(3, 3.0, 2.0, 2.0).unwrap();
        let op = assemble_operator(&grid, &p.coefficients(), 0, true).unwrap();
        for seed in 0..8u64 {
            let u: Vec<f64> = (0..120)
                .map(|i| {
                    let x = (i as u64).wrapping_mul(6364136223846793005).wrapping_add(seed);
                    ((x >> 33) as f64 / (1u64 << 31) as f64) - 1.0
                })
                .collect();
            assert!(op.rayleigh_quotient(&u).unwrap() <= 0.0);
        }
    }

    #[test]
    fn centrifugal_channel_uses_inner_dirichlet() {
        let grid = build_grid(3, 8.0, 60, 2.0).unwrap();
        let p = OperatorParams::new(3, 3.0, 2.0, 2.0).unwrap();
        let op0 = assemble_operator(&grid, &p.coefficients(), 0, true).unwrap();
        let op1 = assemble_operator(&grid, &p.coefficients(), 1, true).unwrap();
        assert_eq!(op0.boundary().0, BoundaryKind::ZeroFlux);
        assert_eq!(op1.boundary().0, BoundaryKind::Dirichlet);
        // the ℓ = 1 channel lies strictly below the ℓ = 0 ground level
        let top0 = op0.scaled_tridiag().top_eigenvalues(1).unwrap()[0];
        let top1 = op1.scaled_tridiag().top_eigenvalues(1).unwrap()[0];
        assert!(top1 < top0);
    }
}
