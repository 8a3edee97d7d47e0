//! Kernels of tensor operators `Δ = A⊗D − B⊗C` built from two pencils
//! `A − λB` and `C − μD`.

use serde::{Deserialize, Serialize};

use crate::matcore::{kron, kron_vec, nullspace_abs, CVector, Subspace};
use crate::pencil::{kcf_structure, kronecker_chains, KroneckerChain, KroneckerStructure};
use crate::strat::{t_alpha, Segre};
use crate::{Error, KroneckerBlock, MatrixPencil, Result, Rng, Tolerances};

/// The block pairings that contribute kernel vectors, the left block taken
/// from `A − λB` and the right one from `C − μD`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairKind {
    /// `(J_{d1}(α), J_{d2}(α))`
    JordanJordan,
    /// `(N_{d1}, N_{d2})`
    InfiniteInfinite,
    /// `(N_{d1}, L_{d2})`
    InfiniteRight,
    /// `(L_{d1}, N_{d2})`
    RightInfinite,
    /// `(L_{d1}, J_{d2}(α))`
    RightJordan,
    /// `(J_{d1}(α), L_{d2})`
    JordanRight,
    /// `(L_{d1}, L_{d2})`
    RightRight,
    /// `(L_{d1}, L_{d2}ᵀ)` with `d1 < d2`
    RightLeft,
    /// `(L_{d1}ᵀ, L_{d2})` with `d1 > d2`
    LeftRight,
}

impl PairKind {
    pub fn label(self) -> char {
        match self {
            PairKind::JordanJordan => 'a',
            PairKind::InfiniteInfinite => 'b',
            PairKind::InfiniteRight => 'c',
            PairKind::RightInfinite => 'd',
            PairKind::RightJordan => 'e',
            PairKind::JordanRight => 'f',
            PairKind::RightRight => 'g',
            PairKind::RightLeft => 'h',
            PairKind::LeftRight => 'i',
        }
    }

    /// Recognises a contributing pair; `None` for pairs that add nothing.
    pub fn classify(
        left: &KroneckerBlock,
        right: &KroneckerBlock,
        tol: &Tolerances,
    ) -> Option<Self> {
        use KroneckerBlock::*;
        match (left, right) {
            (Finite { alpha: a, .. }, Finite { alpha: b, .. }) => tol
                .same_eigenvalue(*a, *b)
                .then_some(PairKind::JordanJordan),
            (Infinite { .. }, Infinite { .. }) => Some(PairKind::InfiniteInfinite),
            (Infinite { .. }, Right { .. }) => Some(PairKind::InfiniteRight),
            (Right { .. }, Infinite { .. }) => Some(PairKind::RightInfinite),
            (Right { .. }, Finite { .. }) => Some(PairKind::RightJordan),
            (Finite { .. }, Right { .. }) => Some(PairKind::JordanRight),
            (Right { .. }, Right { .. }) => Some(PairKind::RightRight),
            (Right { degree: d1 }, Left { degree: d2 }) if d1 < d2 => Some(PairKind::RightLeft),
            (Left { degree: d1 }, Right { degree: d2 }) if d1 > d2 => Some(PairKind::LeftRight),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairContribution {
    pub left_block: KroneckerBlock,
    pub right_block: KroneckerBlock,
    pub kind: PairKind,
    /// `min(d1, d2)` for regular pairs; not derived for the others.
    pub dim: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct TensorKernelReport {
    pub total_dim: usize,
    pub contributions: Vec<PairContribution>,
    /// Explicit basis, available when both pencils are regular.
    pub basis: Option<Subspace>,
}

fn require_square(p: &MatrixPencil) -> Result<()> {
    if p.is_square() {
        Ok(())
    } else {
        Err(Error::NonSquare {
            rows: p.rows(),
            cols: p.cols(),
        })
    }
}

/// `A⊗D − B⊗C` for `p1 = A − λB` and `p2 = C − μD`.
pub fn tensor_operator(p1: &MatrixPencil, p2: &MatrixPencil) -> crate::CMatrix {
    kron(p1.a(), p2.b()) - kron(p1.b(), p2.a())
}

/// Numerical kernel of `A⊗D − B⊗C`. The rank threshold scales with
/// `‖A‖‖D‖ + ‖B‖‖C‖`, since the operator itself may be pure rounding noise.
pub fn tensor_kernel(p1: &MatrixPencil, p2: &MatrixPencil, tol: &Tolerances) -> Subspace {
    let op = tensor_operator(p1, p2);
    let scale = p1.a().norm() * p2.b().norm() + p1.b().norm() * p2.a().norm();
    let rel = tol.rank_rel(op.nrows(), op.ncols());
    nullspace_abs(&op, rel * scale, tol.subspace)
}

/// Nullity of `A⊗D − B⊗C`.
pub fn t_dim_numeric(p1: &MatrixPencil, p2: &MatrixPencil, tol: &Tolerances) -> Result<usize> {
    require_square(p1)?;
    require_square(p2)?;
    Ok(tensor_kernel(p1, p2, tol).dim())
}

/// Kernel dimension predicted from two regular structures: the min-sum
/// over every common eigenvalue, infinity included.
pub fn t_dim_structural(
    s1: &KroneckerStructure,
    s2: &KroneckerStructure,
    tol: &Tolerances,
) -> Result<usize> {
    if !s1.is_regular() || !s2.is_regular() {
        return Err(Error::RegularOnly);
    }
    let mut total = t_alpha(
        &Segre::normalized(s1.infinite_segre()),
        &Segre::normalized(s2.infinite_segre()),
    );
    let f2 = s2.finite_segre(tol);
    for (alpha, d) in s1.finite_segre(tol) {
        if let Some((_, e)) = f2.iter().find(|(b, _)| tol.same_eigenvalue(alpha, *b)) {
            total += t_alpha(&Segre::normalized(d), &Segre::normalized(e.clone()));
        }
    }
    Ok(total)
}

/// Orthonormalised span of `z_j = Σ_{i≤j} u_i ⊗ v_{j+1−i}` over every
/// matched pair of regular chains.
pub fn kernel_basis_regular(
    p1: &MatrixPencil,
    p2: &MatrixPencil,
    chains1: &[KroneckerChain],
    chains2: &[KroneckerChain],
    tol: &Tolerances,
) -> Result<Subspace> {
    if chains1.iter().chain(chains2).any(|c| !c.block.is_regular()) {
        return Err(Error::RegularOnly);
    }
    let n = p1.cols() * p2.cols();
    let mut zs: Vec<CVector> = Vec::new();
    for c1 in chains1 {
        for c2 in chains2 {
            if PairKind::classify(&c1.block, &c2.block, tol).is_none() {
                continue;
            }
            let d = c1.vectors.len().min(c2.vectors.len());
            for j in 0..d {
                let mut z = CVector::zeros(n);
                for i in 0..=j {
                    z += kron_vec(&c1.vectors[i], &c2.vectors[j - i]);
                }
                zs.push(z.normalize());
            }
        }
    }
    if zs.is_empty() {
        return Ok(Subspace::zero(n, tol.subspace));
    }
    Ok(Subspace::span(&zs, tol.subspace))
}

/// Kernel report for two square pencils: the numerical dimension, the
/// contributing block pairs, and an explicit basis in the regular case.
pub fn tensor_kernel_report(
    p1: &MatrixPencil,
    p2: &MatrixPencil,
    rng: &mut Rng,
    tol: &Tolerances,
) -> Result<TensorKernelReport> {
    let total_dim = t_dim_numeric(p1, p2, tol)?;
    let s1 = kcf_structure(p1, rng, tol)?;
    let s2 = kcf_structure(p2, rng, tol)?;
    let mut contributions = Vec::new();
    for b1 in &s1.blocks {
        for b2 in &s2.blocks {
            if let Some(kind) = PairKind::classify(b1, b2, tol) {
                let dim = match kind {
                    PairKind::JordanJordan | PairKind::InfiniteInfinite => {
                        Some(b1.cols().min(b2.cols()))
                    }
                    _ => None,
                };
                contributions.push(PairContribution {
                    left_block: *b1,
                    right_block: *b2,
                    kind,
                    dim,
                });
            }
        }
    }
    let basis = if s1.is_regular() && s2.is_regular() {
        let c1 = kronecker_chains(p1, &s1, tol)?;
        let c2 = kronecker_chains(p2, &s2, tol)?;
        Some(kernel_basis_regular(p1, p2, &c1, &c2, tol)?)
    } else {
        None
    };
    Ok(TensorKernelReport {
        total_dim,
        contributions,
        basis,
    })
}
