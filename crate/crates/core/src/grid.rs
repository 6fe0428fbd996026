//! Graded radial meshes on [0, R].
//!
//! Interior nodes r_i = R (i/(n+1))^g for i = 1..n; grading g > 1
//! concentrates nodes near the origin where the centrifugal and Green
//! singularities live.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct RadialGrid {
    dim: u32,
    radius: f64,
    grading: f64,
    nodes: Vec<f64>,
    /// Volumes ∫ r^{N−1} dr of the n+1 segments delimited by
    /// {0, r_1, …, r_n, R}; they sum to R^N / N exactly.
    cell_volumes: Vec<f64>,
}

impl RadialGrid {
    pub fn build(dim: u32, radius: f64, n: usize, grading: f64) -> Result<Self> {
        if dim < 3 {
            return Err(Error::param("dim", format!("need N >= 3, got {dim}")));
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::param("radius", format!("need R > 0, got {radius}")));
        }
        if n < 1 {
            return Err(Error::param("n", "need at least one interior node".to_string()));
        }
        if !(grading >= 1.0) || !grading.is_finite() {
            return Err(Error::param("grading", format!("need grading >= 1, got {grading}")));
        }
        let nodes: Vec<f64> = (1..=n)
            .map(|i| radius * (i as f64 / (n + 1) as f64).powf(grading))
            .collect();
        let mut cell_volumes = Vec::with_capacity(n + 1);
        let mut prev = 0.0;
        for &r in nodes.iter().chain(std::iter::once(&radius)) {
            cell_volumes.push(segment_volume(dim, prev, r));
            prev = r;
        }
        Ok(Self { dim, radius, grading, nodes, cell_volumes })
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn grading(&self) -> f64 {
        self.grading
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn cell_volumes(&self) -> &[f64] {
        &self.cell_volumes
    }

    /// Face positions of the vertex-centered control volumes: midpoints
    /// between consecutive nodes, with the inner face at r_1/2 and the
    /// outer face at (r_n + R)/2. `face(i)` is the face right of node i+1.
    pub fn face(&self, i: usize) -> f64 {
        let n = self.nodes.len();
        if i == 0 {
            return 0.5 * self.nodes[0];
        }
        if i >= n {
            return 0.5 * (self.nodes[n - 1] + self.radius);
        }
        0.5 * (self.nodes[i - 1] + self.nodes[i])
    }

    /// Lebesgue volume ∫ r^{N−1} dr of the control volume of node `i`
    /// (0-based), taking the inner cell down to r = 0.
    pub fn control_volume(&self, i: usize) -> f64 {
        let lo = if i == 0 { 0.0 } else { self.face(i) };
        let hi = self.face(i + 1);
        segment_volume(self.dim, lo, hi)
    }

    /// All control volumes; these are the discrete L^p weights.
    pub fn control_volumes(&self) -> Vec<f64> {
        (0..self.nodes.len()).map(|i| self.control_volume(i)).collect()
    }
}

pub(crate) fn segment_volume(dim: u32, a: f64, b: f64) -> f64 {
    (b.powi(dim as i32) - a.powi(dim as i32)) / dim as f64
}

/// Build a graded radial grid (free-function form of `RadialGrid::build`).
pub fn build_grid(dim: u32, radius: f64, n: usize, grading: f64) -> Result<RadialGrid> {
    RadialGrid::build(dim, radius, n, grading)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_grading_gives_equispaced_nodes() {
        let g = build_grid(3, 2.0, 7, 1.0).unwrap();
        for (i, &r) in g.nodes().iter().enumerate() {
            let expect = 2.0 * (i + 1) as f64 / 8.0;
            assert!((r - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn single_node_splits_cell_volumes_as_hand_integration() {
        // N=3, R=1, n=1, grading=1: node at 1/2 splits r³/3 into 1/24 and 7/24.
        let g = build_grid(3, 1.0, 1, 1.0).unwrap();
        assert_eq!(g.cell_volumes().len(), 2);
        assert!((g.cell_volumes()[0] - 1.0 / 24.0).abs() < 1e-16);
        assert!((g.cell_volumes()[1] - 7.0 / 24.0).abs() < 1e-16);
    }

    #[test]
    fn cell_volumes_sum_to_ball_volume() {
        for (dim, radius, n, grading) in
            [(3u32, 20.0, 250, 2.0), (4, 7.5, 64, 1.5), (5, 1.0, 33, 3.0)]
        {
            let g = build_grid(dim, radius, n, grading).unwrap();
            let total: f64 = g.cell_volumes().iter().sum();
            let exact = radius.powi(dim as i32) / dim as f64;
            assert!((total - exact).abs() <= 1e-12 * exact, "sum off for {dim} {radius}");
            assert!(g.cell_volumes().iter().all(|&v| v > 0.0));
            assert!(g.nodes().windows(2).all(|w| w[0] < w[1]));
            assert!(g.nodes()[0] > 0.0 && *g.nodes().last().unwrap() < radius);
        }
    }

    #[test]
    fn doubling_n_halves_max_cell_width_for_uniform_grading() {
        let width = |g: &RadialGrid| {
            let mut prev = 0.0;
            let mut max: f64 = 0.0;
            for &r in g.nodes().iter().chain(std::iter::once(&g.radius())) {
                max = max.max(r - prev);
                prev = r;
            }
            max
        };
        let coarse = build_grid(3, 10.0, 99, 1.0).unwrap();
        let fine = build_grid(3, 10.0, 199, 1.0).unwrap();
        assert!((width(&coarse) / width(&fine) - 2.0).abs() < 1e-10);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(build_grid(2, 1.0, 8, 1.0).is_err());
        assert!(build_grid(3, 0.0, 8, 1.0).is_err());
        assert!(build_grid(3, 1.0, 0, 1.0).is_err());
        assert!(build_grid(3, 1.0, 8, 0.5).is_err());
    }
}
