//! Analysis of a single matrix pencil `A − λB`.

mod chains;
mod equiv;
mod kcf;
mod minimal;
mod spectrum;
mod structure;
mod synth;

pub use chains::{kronecker_chains, KroneckerChain};
pub use equiv::{is_eigenvalue_equiv, EigenvalueEquivalence};
pub use kcf::{kcf_structure, weyr_counts};
pub(crate) use minimal::minimal_reducing_of;
pub use minimal::{
    generic_kernel, generic_kernel_of, minimal_basis, minimal_reducing, MinimalBasisVector,
};
pub(crate) use spectrum::regular_eigen_candidates;
pub use spectrum::{eigenvalues_regular, RegularEigenvalue};
pub use structure::{
    format_complex, parse_complex, BundleDescriptor, KroneckerBlock, KroneckerStructure,
};
pub use synth::synth_pencil;

use num_complex::Complex64 as C64;

use crate::matcore::{self, random_complex, CMatrix, Subspace};
use crate::{Error, Result, Rng, Tolerances};

/// The pencil `A − λB` with `A`, `B` of equal shape.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixPencil {
    a: CMatrix,
    b: CMatrix,
}

impl MatrixPencil {
    pub fn new(a: CMatrix, b: CMatrix) -> Result<Self> {
        if a.shape() != b.shape() {
            return Err(Error::Dimension(format!(
                "pencil halves have shapes {:?} and {:?}",
                a.shape(),
                b.shape()
            )));
        }
        if !matcore::is_finite(&a) || !matcore::is_finite(&b) {
            return Err(Error::NonFinite("pencil".into()));
        }
        Ok(MatrixPencil { a, b })
    }

    pub fn a(&self) -> &CMatrix {
        &self.a
    }

    pub fn b(&self) -> &CMatrix {
        &self.b
    }

    pub fn rows(&self) -> usize {
        self.a.nrows()
    }

    pub fn cols(&self) -> usize {
        self.a.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    /// `A − λB`.
    pub fn at(&self, lambda: C64) -> CMatrix {
        &self.a - &self.b * lambda
    }

    /// `(Aᵀ, Bᵀ)`; swaps left and right singular structure.
    pub fn transpose(&self) -> MatrixPencil {
        MatrixPencil {
            a: self.a.transpose(),
            b: self.b.transpose(),
        }
    }

    /// `(B, A)`; exchanges the eigenvalues `0` and `∞`.
    pub fn reversed(&self) -> MatrixPencil {
        MatrixPencil {
            a: self.b.clone(),
            b: self.a.clone(),
        }
    }

    /// `‖A‖_F + ‖B‖_F`, used to normalise residuals.
    pub fn scale(&self) -> f64 {
        self.a.norm() + self.b.norm()
    }

    /// Kernel of `A − λB` at a possibly inexact `λ`, rank decided against the
    /// pencil's scale rather than the shifted matrix's own norm.
    pub fn kernel_at(&self, lambda: C64, tol: &Tolerances) -> Subspace {
        let scale = self.a.norm() + (1.0 + lambda.norm()) * self.b.norm();
        let rel = tol.shifted_rel(self.rows(), self.cols());
        matcore::nullspace_abs(&self.at(lambda), rel * scale, tol.subspace)
    }

    /// A random shift of the magnitude of the pencil's eigenvalues.
    pub(crate) fn random_shift(&self, rng: &mut Rng) -> C64 {
        let nb = self.b.norm();
        let ratio = if nb == 0.0 {
            1.0
        } else {
            (self.a.norm() / nb).clamp(1e-2, 1e2)
        };
        random_complex(rng) * ratio
    }

    pub(crate) fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NonSquare {
                rows: self.rows(),
                cols: self.cols(),
            })
        }
    }
}

/// `max_ξ rank(A − ξB)` sampled at random shifts.
///
/// Three samples must agree; otherwise three more are drawn and the later
/// ones must agree with the overall maximum.
pub fn normal_rank(p: &MatrixPencil, rng: &mut Rng, tol: &Tolerances) -> Result<usize> {
    if p.rows() == 0 || p.cols() == 0 {
        return Ok(0);
    }
    let sample = |rng: &mut Rng| matcore::rank_tol(&p.at(p.random_shift(rng)), tol);
    let first: Vec<usize> = (0..3).map(|_| sample(rng)).collect();
    if first.iter().all(|&r| r == first[0]) {
        return Ok(first[0]);
    }
    let second: Vec<usize> = (0..3).map(|_| sample(rng)).collect();
    let max = first.iter().chain(&second).copied().max().unwrap_or(0);
    if second.iter().all(|&r| r == max) {
        return Ok(max);
    }
    Err(Error::ToleranceAmbiguity(format!(
        "normal rank samples disagree: {first:?} then {second:?}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{diag, real_matrix};
    use crate::rng_from_seed;

    #[test]
    fn normal_rank_examples() {
        let mut rng = rng_from_seed(1);
        let tol = Tolerances::default();
        let id = MatrixPencil::new(CMatrix::identity(2, 2), CMatrix::identity(2, 2)).unwrap();
        assert_eq!(normal_rank(&id, &mut rng, &tol).unwrap(), 2);
        // [-λ, 1]
        let l1 = MatrixPencil::new(
            real_matrix(1, 2, &[0.0, 1.0]),
            real_matrix(1, 2, &[1.0, 0.0]),
        )
        .unwrap();
        assert_eq!(normal_rank(&l1, &mut rng, &tol).unwrap(), 1);
        // Δ1 − λΔ0 of the diagonal common-factor example.
        let d =
            MatrixPencil::new(diag(&[-2.0, 0.0, 2.0, 0.0]), diag(&[0.0, -2.0, 2.0, 0.0])).unwrap();
        assert_eq!(normal_rank(&d, &mut rng, &tol).unwrap(), 3);
    }

    #[test]
    fn rejects_bad_shapes_and_nan() {
        assert!(MatrixPencil::new(CMatrix::zeros(2, 2), CMatrix::zeros(2, 3)).is_err());
        let mut a = CMatrix::zeros(1, 1);
        a[(0, 0)] = C64::new(f64::NAN, 0.0);
        assert!(matches!(
            MatrixPencil::new(a, CMatrix::zeros(1, 1)),
            Err(Error::NonFinite(_))
        ));
    }
}
