//! One-dimensional quadrature and small optimization helpers.

use crate::error::{Error, Result};

/// Composite Simpson rule with `n` subintervals (`n` even).
pub fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    assert!(n >= 2 && n % 2 == 0, "simpson needs an even interval count");
    if a == b {
        return 0.0;
    }
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let x = a + i as f64 * h;
        acc += if i % 2 == 1 { 4.0 * f(x) } else { 2.0 * f(x) };
    }
    acc * h / 3.0
}

/// Simpson with interval doubling until the relative change drops below
/// `rel_tol`. Returns the value and the final interval count.
pub fn simpson_doubling(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    n0: usize,
    rel_tol: f64,
    max_intervals: usize,
) -> Result<(f64, usize)> {
    let mut n = n0.max(2);
    if n % 2 == 1 {
        n += 1;
    }
    let mut prev = simpson(f, a, b, n);
    loop {
        n *= 2;
        let cur = simpson(f, a, b, n);
        let scale = cur.abs().max(prev.abs()).max(1e-300);
        if (cur - prev).abs() <= rel_tol * scale {
            return Ok((cur, n));
        }
        if n >= max_intervals {
            return Err(Error::QuadratureAccuracy(format!(
                "no convergence on [{a:.3e}, {b:.3e}] after {n} intervals \
                 (last change {:.3e} rel)",
                (cur - prev).abs() / scale
            )));
        }
        prev = cur;
    }
}

fn adaptive_rec(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let h = b - a;
    let left = h / 12.0 * (fa + 4.0 * flm + fm);
    let right = h / 12.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol || h.abs() < 1e-14 * (a.abs() + b.abs() + 1.0) {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::QuadratureAccuracy(format!(
            "adaptive refinement exhausted on [{a:.6e}, {b:.6e}]"
        )));
    }
    let l = adaptive_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?;
    let r = adaptive_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?;
    Ok(l + r)
}

/// Adaptive Simpson quadrature to absolute tolerance `tol` (with the usual
/// Richardson acceptance test).
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    adaptive_rec(f, a, b, fa, fm, fb, whole, tol.max(1e-300), 48)
}

/// Adaptive Simpson driven by a relative tolerance: a first pass estimates
/// the scale, a second pass integrates to `rel_tol * scale`.
pub fn adaptive_simpson_rel(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    let rough = simpson(f, a, b, 64).abs();
    let scale = rough.max(1e-300);
    adaptive_simpson(f, a, b, rel_tol * scale)
}

/// Golden-section maximization of a unimodal bracket `[a, b]`.
/// Returns `(argmax, max)`.
pub fn golden_max(f: &dyn Fn(f64) -> f64, a: f64, b: f64, iters: usize) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..iters {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

/// Least-squares straight line through `(x, y)` points: `(slope, intercept)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let denom = n * sxx - sx * sx;
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    (slope, intercept)
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev-based initial guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        loop {
            let (mut p0, mut p1) = (1.0f64, x);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            // derivative of P_n via P_{n-1}
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                let (mut p0b, mut p1b) = (1.0f64, x);
                for k in 2..=n {
                    let k = k as f64;
                    let p2 = ((2.0 * k - 1.0) * x * p1b - (k - 1.0) * p0b) / k;
                    p0b = p1b;
                    p1b = p2;
                }
                let dpb = n as f64 * (x * p1b - p0b) / (x * x - 1.0);
                nodes[i] = -x;
                nodes[n - 1 - i] = x;
                let w = 2.0 / ((1.0 - x * x) * dpb * dpb);
                weights[i] = w;
                weights[n - 1 - i] = w;
                break;
            }
        }
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_exact_on_cubics() {
        let val = simpson(&|x| x * x * x - 2.0 * x + 1.0, 0.0, 2.0, 2);
        // ∫_0^2 (x³ - 2x + 1) dx = 4 - 4 + 2 = 2
        assert!((val - 2.0).abs() < 1e-13);
    }

    #[test]
    fn adaptive_matches_analytic_integrals() {
        let v = adaptive_simpson(&|x: f64| x.exp(), 0.0, 1.0, 1e-12).unwrap();
        assert!((v - (std::f64::consts::E - 1.0)).abs() < 1e-10);
        let v = adaptive_simpson(&|x: f64| x.sqrt(), 0.0, 1.0, 1e-10).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-8);
    }

    #[test]
    fn doubling_reports_interval_count() {
        let (v, n) = simpson_doubling(&|x: f64| 1.0 / (1.0 + x * x), 0.0, 1.0, 4, 1e-10, 1 << 20)
            .unwrap();
        assert!((v - std::f64::consts::FRAC_PI_4).abs() < 1e-9);
        assert!(n >= 8);
    }

    #[test]
    fn golden_finds_parabola_max() {
        // the argmax of a smooth function is only resolvable to ~sqrt(eps)
        let (x, fx) = golden_max(&|x| -(x - 1.7) * (x - 1.7) + 3.0, 0.0, 5.0, 80);
        assert!((x - 1.7).abs() < 1e-7);
        assert!((fx - 3.0).abs() < 1e-14);
    }

    #[test]
    fn linear_fit_recovers_line() {
        let xs: Vec<f64> = (0..20).map(|i| i as f64 * 0.3).collect();
        let ys: Vec<f64> = xs.iter().map(|x| -0.5 * x + 2.25).collect();
        let (a, b) = linear_fit(&xs, &ys);
        assert!((a + 0.5).abs() < 1e-12);
        assert!((b - 2.25).abs() < 1e-12);
    }

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(8);
        // degree-15 polynomial is exact for 8 nodes
        let val: f64 = x.iter().zip(&w).map(|(&xi, &wi)| wi * xi.powi(14)).sum();
        assert!((val - 2.0 / 15.0).abs() < 1e-13);
        let total: f64 = w.iter().sum();
        assert!((total - 2.0).abs() < 1e-13);
    }
}
