use serde::{Deserialize, Serialize};

/// Tolerance policy threaded through every rank decision in the crate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative rank threshold. `None` means `max(rows, cols) · ε`.
    pub rank: Option<f64>,
    /// Relative rank threshold for matrices built at computed, hence inexact,
    /// eigenvalues.
    pub shifted_rank: f64,
    /// Relative distance below which two eigenvalues are the same.
    pub cluster: f64,
    /// Relative radius used to pool the perturbed copies of a defective
    /// eigenvalue before they are averaged.
    pub spread: f64,
    /// Sine of the largest angle still counted as "inside" a subspace.
    pub subspace: f64,
    /// Relative threshold for polynomial coefficients and Sylvester ranks.
    pub poly: f64,
    /// Radius of the probing neighbourhood in the genericity and
    /// common-factor tests.
    pub neighbourhood: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rank: None,
            shifted_rank: 1e-8,
            cluster: 1e-6,
            spread: 2e-3,
            subspace: 1e-6,
            poly: 1e-9,
            neighbourhood: 1e-3,
        }
    }
}

impl Tolerances {
    /// Policy with an explicit relative rank tolerance.
    pub fn with_rank(rank: f64) -> Self {
        Tolerances {
            rank: Some(rank),
            ..Default::default()
        }
    }

    /// Relative rank threshold for a matrix of the given shape.
    pub fn rank_rel(&self, rows: usize, cols: usize) -> f64 {
        self.rank
            .unwrap_or_else(|| rows.max(cols).max(1) as f64 * f64::EPSILON)
    }

    /// Relative threshold at inexact shifts: never tighter than the plain one.
    pub fn shifted_rel(&self, rows: usize, cols: usize) -> f64 {
        self.shifted_rank.max(self.rank_rel(rows, cols))
    }

    /// Whether two eigenvalues coincide under the clustering tolerance.
    pub fn same_eigenvalue(&self, a: num_complex::Complex64, b: num_complex::Complex64) -> bool {
        (a - b).norm() <= self.cluster * 1f64.max(a.norm()).max(b.norm())
    }
}
