//! The equivalent characterisations of an eigenvalue of a singular pencil.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::minimal::{generic_kernel_of, minimal_basis_with_count, minimal_reducing_of};
use super::{normal_rank, MatrixPencil};
use crate::{Result, Rng, Tolerances};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenvalueEquivalence {
    /// `rank(A − λ0B) < nrank(A − λB)`.
    pub rank_drop: bool,
    /// `dim GKer(A − λ0B) < dim ker(A − λ0B)`.
    pub generic_kernel_smaller: bool,
    /// Some kernel vector lies outside the generic kernel.
    pub kernel_outside_generic: bool,
    /// Some kernel vector lies outside the minimal reducing subspace.
    pub kernel_outside_reducing: bool,
    /// All four conditions agree.
    pub consistent: bool,
}

impl EigenvalueEquivalence {
    /// The verdict when the conditions agree.
    pub fn is_eigenvalue(&self) -> Option<bool> {
        self.consistent.then_some(self.rank_drop)
    }
}

/// Evaluates each characterisation independently at `lambda0`.
pub fn is_eigenvalue_equiv(
    p: &MatrixPencil,
    lambda0: C64,
    rng: &mut Rng,
    tol: &Tolerances,
) -> Result<EigenvalueEquivalence> {
    p.require_square()?;
    let n = p.cols();
    let nrank = normal_rank(p, rng, tol)?;
    let basis = minimal_basis_with_count(p, n - nrank, tol)?;
    let ker = p.kernel_at(lambda0, tol);
    let gker = generic_kernel_of(&basis, n, lambda0, tol);
    let reducing = minimal_reducing_of(p, &basis, rng, tol)?;

    let rank_drop = n - ker.dim() < nrank;
    let generic_kernel_smaller = gker.dim() < ker.dim();
    let kernel_outside_generic = gker
        .principal_sines(&ker)?
        .first()
        .is_some_and(|&s| s > tol.subspace);
    let kernel_outside_reducing = reducing
        .principal_sines(&ker)?
        .first()
        .is_some_and(|&s| s > tol.subspace);
    let flags = [
        rank_drop,
        generic_kernel_smaller,
        kernel_outside_generic,
        kernel_outside_reducing,
    ];
    Ok(EigenvalueEquivalence {
        rank_drop,
        generic_kernel_smaller,
        kernel_outside_generic,
        kernel_outside_reducing,
        consistent: flags.iter().all(|&f| f == flags[0]),
    })
}
