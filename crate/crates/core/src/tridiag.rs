//! Symmetric tridiagonal eigensolving and tridiagonal linear solves.
//!
//! Eigenvalues come from Sturm-count bisection (componentwise backward
//! stable, so smooth low modes keep full accuracy even when the scaled
//! matrix norm is huge near the origin of a graded mesh), eigenvectors from
//! shifted inverse iteration with a final Rayleigh-quotient polish.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::ops::{Div, Mul, Neg, Sub};

#[derive(Debug, Clone)]
pub struct SymTridiag {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiag {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        let n = self.len();
        let mut out = vec![0.0; n];
        for i in 0..n {
            let mut acc = self.diag[i] * v[i];
            if i > 0 {
                acc += self.off[i - 1] * v[i - 1];
            }
            if i + 1 < n {
                acc += self.off[i] * v[i + 1];
            }
            out[i] = acc;
        }
        out
    }

    /// Number of eigenvalues strictly below `x` (Sturm LDLᵀ count).
    pub fn count_below(&self, x: f64) -> usize {
        let n = self.len();
        let mut count = 0usize;
        let mut q = self.diag[0] - x;
        if q < 0.0 {
            count += 1;
        }
        for i in 1..n {
            if q == 0.0 {
                q = -1e-300;
            }
            q = (self.diag[i] - x) - self.off[i - 1] * self.off[i - 1] / q;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut radius = 0.0;
            if i > 0 {
                radius += self.off[i - 1].abs();
            }
            if i + 1 < n {
                radius += self.off[i].abs();
            }
            lo = lo.min(self.diag[i] - radius);
            hi = hi.max(self.diag[i] + radius);
        }
        (lo, hi)
    }

    /// Eigenvalue with ascending index `idx` (0-based) by bisection.
    pub fn eigenvalue_by_index(&self, idx: usize) -> Result<f64> {
        let n = self.len();
        if idx >= n {
            return Err(Error::EigenSolve(format!("index {idx} out of range for n={n}")));
        }
        let (mut lo, mut hi) = self.gershgorin();
        let span = (hi - lo).max(1.0);
        lo -= 1e-12 * span;
        hi += 1e-12 * span;
        for _ in 0..220 {
            let mid = 0.5 * (lo + hi);
            if self.count_below(mid) <= idx {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-15 * (mid.abs() + 1.0) {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// The `k` largest eigenvalues, descending, bisection only.
    pub fn top_eigenvalues(&self, k: usize) -> Result<Vec<f64>> {
        let n = self.len();
        if k == 0 || k > n {
            return Err(Error::EigenSolve(format!("requested {k} of {n} eigenvalues")));
        }
        (0..k).map(|j| self.eigenvalue_by_index(n - 1 - j)).collect()
    }

    /// All eigenvalues, ascending.
    pub fn all_eigenvalues(&self) -> Vec<f64> {
        (0..self.len())
            .map(|i| self.eigenvalue_by_index(i).expect("index is in range"))
            .collect()
    }

    /// Eigenvalues adjacent to `x`: (largest eigenvalue < x, smallest ≥ x).
    pub fn nearest_eigenvalues(&self, x: f64) -> (Option<f64>, Option<f64>) {
        let below = self.count_below(x);
        let lower = if below > 0 { self.eigenvalue_by_index(below - 1).ok() } else { None };
        let upper = if below < self.len() { self.eigenvalue_by_index(below).ok() } else { None };
        (lower, upper)
    }

    /// One inverse-iteration eigenvector for the eigenvalue nearest `shift`,
    /// orthogonalized against `previous`, unit ℓ² norm. Returns the vector,
    /// the Rayleigh-polished eigenvalue, and the residual ‖Az − ρz‖₂.
    pub fn inverse_iteration(
        &self,
        shift: f64,
        previous: &[Vec<f64>],
    ) -> Result<(Vec<f64>, f64, f64)> {
        let n = self.len();
        let scale = {
            let (lo, hi) = self.gershgorin();
            lo.abs().max(hi.abs()).max(1.0)
        };
        // Residual target on the eigenvalue scale, not the matrix scale:
        // graded meshes push ‖A‖ many orders above the levels of interest.
        let target = 1e-13 * (shift.abs() + 1.0);
        let mut shift = shift;
        let mut z: Vec<f64> = splitmix_vector(n);
        orthogonalize(&mut z, previous);
        normalize(&mut z);

        let mut best: Option<(Vec<f64>, f64, f64)> = None;
        for attempt in 0..4 {
            for _ in 0..6 {
                let d: Vec<f64> = self.diag.iter().map(|&x| x - shift).collect();
                let mut w = match gtsv(&self.off, &d, &self.off, &z) {
                    Ok(w) => w,
                    Err(_) => {
                        break;
                    }
                };
                orthogonalize(&mut w, previous);
                normalize(&mut w);
                z = w;
                let az = self.matvec(&z);
                let rho: f64 = z.iter().zip(&az).map(|(a, b)| a * b).sum();
                let residual = az
                    .iter()
                    .zip(&z)
                    .map(|(a, b)| (a - rho * b) * (a - rho * b))
                    .sum::<f64>()
                    .sqrt();
                if best.as_ref().map_or(true, |(_, _, r)| residual < *r) {
                    best = Some((z.clone(), rho, residual));
                }
                if residual <= target {
                    return Ok(best.unwrap());
                }
            }
            shift += 1e-13 * scale * (attempt + 1) as f64;
        }
        best.ok_or_else(|| {
            Error::EigenSolve(format!("inverse iteration failed near shift {shift:.6e}"))
        })
    }

    /// Positive ground eigenvector through unpivoted solves with a shift
    /// just above the top eigenvalue: λ̂I − A is then a Stieltjes matrix
    /// whenever the off-diagonal entries are positive, so iterates from a
    /// positive start stay strictly positive, in floating point too.
    pub fn ground_vector_positive(&self, lambda_top: f64) -> Result<(Vec<f64>, f64, f64)> {
        let n = self.len();
        let shift = lambda_top + 1e-10 * (lambda_top.abs() + 1.0);
        let diag: Vec<f64> = self.diag.iter().map(|&d| shift - d).collect();
        let off: Vec<f64> = self.off.iter().map(|&e| -e).collect();
        let target = 1e-13 * (lambda_top.abs() + 1.0);
        let mut z = vec![1.0; n];
        normalize(&mut z);
        let mut rho = lambda_top;
        let mut residual = f64::INFINITY;
        for _ in 0..30 {
            let mut w = thomas_solve(&diag, &off, &z)?;
            normalize(&mut w);
            z = w;
            let az = self.matvec(&z);
            rho = z.iter().zip(&az).map(|(a, b)| a * b).sum();
            residual = az
                .iter()
                .zip(&z)
                .map(|(a, b)| (a - rho * b) * (a - rho * b))
                .sum::<f64>()
                .sqrt();
            if residual <= target {
                break;
            }
        }
        Ok((z, rho, residual))
    }
}

fn splitmix_vector(n: usize) -> Vec<f64> {
    let mut state = 0x9E37_79B9_7F4A_7C15u64 ^ (n as u64);
    (0..n)
        .map(|_| {
            state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
            let mut x = state;
            x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
            x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
            x ^= x >> 31;
            (x as f64 / u64::MAX as f64) - 0.5
        })
        .collect()
}

fn orthogonalize(v: &mut [f64], basis: &[Vec<f64>]) {
    for b in basis {
        let dot: f64 = v.iter().zip(b).map(|(a, c)| a * c).sum();
        for (x, c) in v.iter_mut().zip(b) {
            *x -= dot * c;
        }
    }
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
}

/// Scalar abstraction for the pivoted tridiagonal elimination.
pub trait GtsvScalar:
    Copy + Mul<Output = Self> + Sub<Output = Self> + Div<Output = Self> + Neg<Output = Self>
{
    fn mag(self) -> f64;
    fn zero() -> Self;
}

impl GtsvScalar for f64 {
    fn mag(self) -> f64 {
        self.abs()
    }
    fn zero() -> Self {
        0.0
    }
}

impl GtsvScalar for Complex64 {
    fn mag(self) -> f64 {
        self.norm()
    }
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
}

/// Tridiagonal solve with partial pivoting (LAPACK gtsv layout: `dl`
/// subdiagonal, `d` diagonal, `du` superdiagonal). The `dl` band doubles as
/// the second-superdiagonal fill after an interchange.
pub fn gtsv<T: GtsvScalar>(dl: &[T], d: &[T], du: &[T], b: &[T]) -> Result<Vec<T>> {
    let n = d.len();
    if b.len() != n || (n > 1 && (dl.len() + 1 != n || du.len() + 1 != n)) {
        return Err(Error::DimensionMismatch { expected: n, got: b.len() });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut dl: Vec<T> = dl.to_vec();
    let mut d: Vec<T> = d.to_vec();
    let mut du: Vec<T> = du.to_vec();
    let mut b: Vec<T> = b.to_vec();

    if n == 1 {
        if d[0].mag() == 0.0 {
            return Err(Error::LinearSolve("singular 1x1 system".into()));
        }
        return Ok(vec![b[0] / d[0]]);
    }

    for i in 0..n - 1 {
        if d[i].mag() >= dl[i].mag() {
            // no interchange
            if d[i].mag() == 0.0 {
                return Err(Error::LinearSolve(format!("zero pivot at row {i}")));
            }
            let fact = dl[i] / d[i];
            d[i + 1] = d[i + 1] - fact * du[i];
            b[i + 1] = b[i + 1] - fact * b[i];
            dl[i] = T::zero(); // no fill
        } else {
            // interchange rows i and i+1
            let fact = d[i] / dl[i];
            d[i] = dl[i];
            let temp = d[i + 1];
            d[i + 1] = du[i] - fact * temp;
            if i + 2 < n {
                dl[i] = du[i + 1]; // fill-in (second superdiagonal)
                du[i + 1] = -fact * dl[i];
            } else {
                dl[i] = T::zero();
            }
            du[i] = temp;
            let tb = b[i];
            b[i] = b[i + 1];
            b[i + 1] = tb - fact * b[i + 1];
        }
    }
    if d[n - 1].mag() == 0.0 {
        return Err(Error::LinearSolve("zero pivot in final row".into()));
    }

    // back substitution; dl[i] holds the fill entry A[i][i+2]
    let mut x = b;
    x[n - 1] = x[n - 1] / d[n - 1];
    if n > 1 {
        x[n - 2] = (x[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        x[i] = (x[i] - du[i] * x[i + 1] - dl[i] * x[i + 2]) / d[i];
    }
    Ok(x)
}

/// Unpivoted Thomas solve for diagonally-dominant / M-matrix tridiagonal
/// systems with a symmetric off-diagonal.
pub fn thomas_solve(diag: &[f64], off: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let factor = ThomasFactor::new(diag, off)?;
    let mut x = rhs.to_vec();
    factor.solve_into(&mut x);
    Ok(x)
}

/// Reusable factorization for repeated unpivoted solves with one matrix
/// (Crank–Nicolson stepping).
#[derive(Debug, Clone)]
pub struct ThomasFactor {
    c: Vec<f64>,
    diag_mod: Vec<f64>,
    off: Vec<f64>,
}

impl ThomasFactor {
    pub fn new(diag: &[f64], off: &[f64]) -> Result<Self> {
        let n = diag.len();
        if n == 0 || off.len() + 1 != n {
            return Err(Error::DimensionMismatch { expected: n, got: off.len() + 1 });
        }
        let mut c = vec![0.0; n];
        let mut diag_mod = vec![0.0; n];
        let mut denom = diag[0];
        if denom == 0.0 {
            return Err(Error::LinearSolve("zero pivot in Thomas factorization".into()));
        }
        diag_mod[0] = denom;
        c[0] = if n > 1 { off[0] / denom } else { 0.0 };
        for i in 1..n {
            denom = diag[i] - off[i - 1] * c[i - 1];
            if denom == 0.0 {
                return Err(Error::LinearSolve("zero pivot in Thomas factorization".into()));
            }
            diag_mod[i] = denom;
            c[i] = if i < n - 1 { off[i] / denom } else { 0.0 };
        }
        Ok(Self { c, diag_mod, off: off.to_vec() })
    }

    pub fn solve_into(&self, rhs: &mut [f64]) {
        let n = self.diag_mod.len();
        rhs[0] /= self.diag_mod[0];
        for i in 1..n {
            rhs[i] = (rhs[i] - self.off[i - 1] * rhs[i - 1]) / self.diag_mod[i];
        }
        for i in (0..n - 1).rev() {
            let next = rhs[i + 1];
            rhs[i] -= self.c[i] * next;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_matrix(n: usize) -> SymTridiag {
        let diag: Vec<f64> = (0..n).map(|i| 2.0 + (i as f64 * 0.37).sin()).collect();
        let off: Vec<f64> = (0..n - 1).map(|i| -1.0 + 0.2 * (i as f64 * 0.61).cos()).collect();
        SymTridiag { diag, off }
    }

    #[test]
    fn counts_partition_the_spectrum() {
        let t = sample_matrix(40);
        let (lo, hi) = t.gershgorin();
        assert_eq!(t.count_below(lo - 1e-9), 0);
        assert_eq!(t.count_below(hi + 1e-9), 40);
    }

    #[test]
    fn eigenvalues_match_dense_oracle() {
        let t = sample_matrix(60);
        let eig = t.all_eigenvalues();
        let mut dense = nalgebra::DMatrix::<f64>::zeros(60, 60);
        for i in 0..60 {
            dense[(i, i)] = t.diag[i];
            if i + 1 < 60 {
                dense[(i, i + 1)] = t.off[i];
                dense[(i + 1, i)] = t.off[i];
            }
        }
        let mut oracle: Vec<f64> = dense.symmetric_eigen().eigenvalues.iter().cloned().collect();
        oracle.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in eig.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-11 * (1.0 + b.abs()), "{a} vs {b}");
        }
    }

    #[test]
    fn inverse_iteration_gives_small_residuals_and_orthogonality() {
        let t = sample_matrix(80);
        let top = t.top_eigenvalues(3).unwrap();
        let mut basis: Vec<Vec<f64>> = Vec::new();
        for &lambda in &top {
            let (z, rho, res) = t.inverse_iteration(lambda, &basis).unwrap();
            assert!(res < 1e-10, "residual {res}");
            assert!((rho - lambda).abs() < 1e-10);
            for b in &basis {
                let dot: f64 = z.iter().zip(b).map(|(a, c)| a * c).sum();
                assert!(dot.abs() < 1e-8);
            }
            basis.push(z);
        }
    }

    #[test]
    fn nearest_eigenvalues_bracket_the_query() {
        let t = sample_matrix(30);
        let all = t.all_eigenvalues();
        let x = 0.5 * (all[10] + all[11]);
        let (lo, hi) = t.nearest_eigenvalues(x);
        assert!((lo.unwrap() - all[10]).abs() < 1e-10);
        assert!((hi.unwrap() - all[11]).abs() < 1e-10);
    }

    #[test]
    fn thomas_solves_spd_systems() {
        let n = 50;
        let diag = vec![4.0; n];
        let off = vec![-1.0; n - 1];
        let x_true: Vec<f64> = (0..n).map(|i| ((i * 7 + 3) % 11) as f64 - 5.0).collect();
        let t = SymTridiag { diag: diag.clone(), off: off.clone() };
        let rhs = t.matvec(&x_true);
        let x = thomas_solve(&diag, &off, &rhs).unwrap();
        for (a, b) in x.iter().zip(&x_true) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn gtsv_handles_systems_that_need_pivoting() {
        // small diagonal forces interchanges
        let n = 6;
        let d = vec![1e-14, 2.0, -1e-13, 3.0, 1e-12, 1.5];
        let dl = vec![1.0, -2.0, 1.5, -0.5, 2.5];
        let du = vec![-1.0, 0.5, 2.0, 1.0, -0.7];
        let x_true: Vec<f64> = (0..n).map(|i| (i as f64) - 2.5).collect();
        // rhs = A x
        let mut rhs = vec![0.0; n];
        for i in 0..n {
            rhs[i] = d[i] * x_true[i];
            if i > 0 {
                rhs[i] += dl[i - 1] * x_true[i - 1];
            }
            if i + 1 < n {
                rhs[i] += du[i] * x_true[i + 1];
            }
        }
        let x = gtsv(&dl, &d, &du, &rhs).unwrap();
        for (a, b) in x.iter().zip(&x_true) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn gtsv_complex_resolvent_style_system() {
        let n = 40;
        let lambda = Complex64::new(-0.3, 0.7);
        let t = sample_matrix(n);
        // (λ I − T) x = b
        let d: Vec<Complex64> = t.diag.iter().map(|&v| lambda - Complex64::new(v, 0.0)).collect();
        let off: Vec<Complex64> = t.off.iter().map(|&v| Complex64::new(-v, 0.0)).collect();
        let x_true: Vec<Complex64> =
            (0..n).map(|i| Complex64::new((i as f64 * 0.1).sin(), (i as f64 * 0.2).cos())).collect();
        let mut rhs = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            rhs[i] = d[i] * x_true[i];
            if i > 0 {
                rhs[i] += off[i - 1] * x_true[i - 1];
            }
            if i + 1 < n {
                rhs[i] += off[i] * x_true[i + 1];
            }
        }
        let x = gtsv(&off, &d, &off, &rhs).unwrap();
        for (a, b) in x.iter().zip(&x_true) {
            assert!((a - b).norm() < 1e-10);
        }
    }
}
