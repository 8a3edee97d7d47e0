//! The two-parameter problem `W_i(λ, μ) x_i = (A_i + λB_i + μC_i) x_i = 0`
//! and its operator determinants.

mod generic;
mod poly;
mod solve;

pub use generic::{check_genericity, GenericityItem, GenericityReport};
pub use poly::{char_poly, coprime_test, on_common_factor, BivarPoly, CoprimeReport};
pub use solve::{
    solve, verify_w_eigenvalue, Eigenvalue2P, RotateMode, SolveDiagnostics, SolveOptions,
    SolveResult, WVerdict,
};

use num_complex::Complex64 as C64;

use crate::matcore::{self, kron, random_complex, CMatrix, Subspace};
use crate::pencil::{
    generic_kernel_of, kcf_structure, minimal_basis, MatrixPencil, MinimalBasisVector,
};
use crate::{Error, Result, Rng, Tolerances};

/// Six square matrices, `W_1` of size `n₁` and `W_2` of size `n₂`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoParameterProblem {
    pub a1: CMatrix,
    pub b1: CMatrix,
    pub c1: CMatrix,
    pub a2: CMatrix,
    pub b2: CMatrix,
    pub c2: CMatrix,
}

impl TwoParameterProblem {
    pub fn new(w1: [CMatrix; 3], w2: [CMatrix; 3]) -> Result<Self> {
        for (i, w) in [&w1, &w2].into_iter().enumerate() {
            let n = w[0].nrows();
            if w.iter().any(|m| m.shape() != (n, n)) {
                return Err(Error::Dimension(format!(
                    "W{} needs three square matrices of one size",
                    i + 1
                )));
            }
            if w.iter().any(|m| !matcore::is_finite(m)) {
                return Err(Error::NonFinite(format!("W{}", i + 1)));
            }
        }
        let [a1, b1, c1] = w1;
        let [a2, b2, c2] = w2;
        Ok(TwoParameterProblem {
            a1,
            b1,
            c1,
            a2,
            b2,
            c2,
        })
    }

    pub fn n1(&self) -> usize {
        self.a1.nrows()
    }

    pub fn n2(&self) -> usize {
        self.a2.nrows()
    }

    /// `(A_i, B_i, C_i)` for `i ∈ {1, 2}`.
    pub fn parts(&self, i: usize) -> Result<[&CMatrix; 3]> {
        match i {
            1 => Ok([&self.a1, &self.b1, &self.c1]),
            2 => Ok([&self.a2, &self.b2, &self.c2]),
            _ => Err(Error::Precondition(format!(
                "pencil index {i} is not 1 or 2"
            ))),
        }
    }

    /// `W_i(λ, μ)`.
    pub fn w(&self, i: usize, lambda: C64, mu: C64) -> Result<CMatrix> {
        let [a, b, c] = self.parts(i)?;
        Ok(a + b * lambda + c * mu)
    }

    /// Reference magnitude of `W_i(λ, μ)` for rank decisions.
    pub(crate) fn w_scale(&self, i: usize, lambda: C64, mu: C64) -> Result<f64> {
        let [a, b, c] = self.parts(i)?;
        Ok(a.norm() + (1.0 + lambda.norm()) * b.norm() + (1.0 + mu.norm()) * c.norm())
    }

    /// Kernel of `W_i(λ, μ)` with the rank decided against the pencil scale.
    pub fn w_kernel(&self, i: usize, lambda: C64, mu: C64, tol: &Tolerances) -> Result<Subspace> {
        let w = self.w(i, lambda, mu)?;
        let thr = tol.shifted_rel(w.nrows(), w.ncols()) * self.w_scale(i, lambda, mu)?;
        Ok(matcore::nullspace_abs(&w, thr, tol.subspace))
    }

    pub(crate) fn w_rank(&self, i: usize, lambda: C64, mu: C64, tol: &Tolerances) -> Result<usize> {
        let n = self.parts(i)?[0].nrows();
        Ok(n - self.w_kernel(i, lambda, mu, tol)?.dim())
    }
}

/// Rotates the parameter plane: `B̃ = cB + sC`, `C̃ = −sB + cC`. An eigenvalue
/// `(λ̃, μ̃)` of the result corresponds to `R(φ)(λ̃, μ̃)` of the input.
pub fn rotate(p: &TwoParameterProblem, phi: f64) -> TwoParameterProblem {
    let (s, c) = phi.sin_cos();
    let turn = |b: &CMatrix, cc: &CMatrix| {
        (
            b * C64::from(c) + cc * C64::from(s),
            cc * C64::from(c) - b * C64::from(s),
        )
    };
    let (b1, c1) = turn(&p.b1, &p.c1);
    let (b2, c2) = turn(&p.b2, &p.c2);
    TwoParameterProblem {
        a1: p.a1.clone(),
        b1,
        c1,
        a2: p.a2.clone(),
        b2,
        c2,
    }
}

/// `R(φ)·(λ̃, μ̃)`: maps an eigenvalue of the rotated problem back.
pub fn derotate(phi: f64, point: (C64, C64)) -> (C64, C64) {
    let (s, c) = phi.sin_cos();
    let (l, m) = point;
    (l * c - m * s, l * s + m * c)
}

/// Operator determinants together with the singular structure of the two
/// pencils `Δ₁ − λΔ₀` and `Δ₂ − μΔ₀`.
#[derive(Clone, Debug)]
pub struct DeltaSystem {
    pub d0: CMatrix,
    pub d1: CMatrix,
    pub d2: CMatrix,
    pub nrank1: usize,
    pub nrank2: usize,
    /// Minimal reducing subspace of `Δ₁ − λΔ₀`.
    pub r1: Subspace,
    /// Minimal reducing subspace of `Δ₂ − μΔ₀`.
    pub r2: Subspace,
    /// Minimal bases of the right polynomial kernels of both pencils.
    pub basis1: Vec<MinimalBasisVector>,
    pub basis2: Vec<MinimalBasisVector>,
}

impl DeltaSystem {
    /// `Δ₁ − λΔ₀` for `i = 1`, `Δ₂ − μΔ₀` for `i = 2`.
    pub fn pencil(&self, i: usize) -> Result<MatrixPencil> {
        match i {
            1 => MatrixPencil::new(self.d1.clone(), self.d0.clone()),
            2 => MatrixPencil::new(self.d2.clone(), self.d0.clone()),
            _ => Err(Error::Precondition(format!(
                "pencil index {i} is not 1 or 2"
            ))),
        }
    }

    pub fn order(&self) -> usize {
        self.d0.nrows()
    }

    /// Generic kernel of pencil `i` at `x`.
    pub fn generic_kernel(&self, i: usize, x: C64, tol: &Tolerances) -> Result<Subspace> {
        let basis = match i {
            1 => &self.basis1,
            2 => &self.basis2,
            _ => {
                return Err(Error::Precondition(format!(
                    "pencil index {i} is not 1 or 2"
                )))
            }
        };
        Ok(generic_kernel_of(basis, self.order(), x, tol))
    }
}

/// `(Δ₀, Δ₁, Δ₂)` without any analysis.
pub fn delta_matrices(p: &TwoParameterProblem) -> (CMatrix, CMatrix, CMatrix) {
    let d0 = kron(&p.b1, &p.c2) - kron(&p.c1, &p.b2);
    let d1 = kron(&p.c1, &p.a2) - kron(&p.a1, &p.c2);
    let d2 = kron(&p.a1, &p.b2) - kron(&p.b1, &p.a2);
    (d0, d1, d2)
}

/// Builds `Δ₀, Δ₁, Δ₂`, checks them against the factorised forms
/// `Δ₁ − ηΔ₀ = C₁⊗W₂(η,0) − W₁(η,0)⊗C₂` and
/// `Δ₂ − ηΔ₀ = W₁(0,η)⊗B₂ − B₁⊗W₂(0,η)` at random `η`, and analyses both
/// pencils.
pub fn build_deltas(
    p: &TwoParameterProblem,
    rng: &mut Rng,
    tol: &Tolerances,
) -> Result<DeltaSystem> {
    let (d0, d1, d2) = delta_matrices(p);
    check_identity(p, &d0, &d1, &d2, rng)?;
    let pen1 = MatrixPencil::new(d1.clone(), d0.clone())?;
    let pen2 = MatrixPencil::new(d2.clone(), d0.clone())?;
    let basis1 = minimal_basis(&pen1, rng, tol)?;
    let basis2 = minimal_basis(&pen2, rng, tol)?;
    let n = d0.nrows();
    let r1 = crate::pencil::minimal_reducing_of(&pen1, &basis1, rng, tol)?;
    let r2 = crate::pencil::minimal_reducing_of(&pen2, &basis2, rng, tol)?;
    Ok(DeltaSystem {
        nrank1: n - basis1.len(),
        nrank2: n - basis2.len(),
        d0,
        d1,
        d2,
        r1,
        r2,
        basis1,
        basis2,
    })
}

fn check_identity(
    p: &TwoParameterProblem,
    d0: &CMatrix,
    d1: &CMatrix,
    d2: &CMatrix,
    rng: &mut Rng,
) -> Result<()> {
    let zero = C64::new(0.0, 0.0);
    let scale = [&p.a1, &p.b1, &p.c1].iter().map(|m| m.norm()).sum::<f64>()
        * [&p.a2, &p.b2, &p.c2].iter().map(|m| m.norm()).sum::<f64>();
    for _ in 0..3 {
        let eta = random_complex(rng);
        let f1 = kron(&p.c1, &p.w(2, eta, zero)?) - kron(&p.w(1, eta, zero)?, &p.c2);
        let f2 = kron(&p.w(1, zero, eta)?, &p.b2) - kron(&p.b1, &p.w(2, zero, eta)?);
        let r1 = (d1 - d0 * eta - f1).norm();
        let r2 = (d2 - d0 * eta - f2).norm();
        let bound = 1e-12 * scale.max(f64::MIN_POSITIVE) * (1.0 + eta.norm());
        if r1.max(r2) > bound {
            return Err(Error::Numerical(format!(
                "operator determinant identity residual {:e}",
                r1.max(r2)
            )));
        }
    }
    Ok(())
}

/// Whether `Δ₁ − λΔ₀` and `Δ₂ − μΔ₀` lie in the same bundle.
pub fn same_bundle_check(d: &DeltaSystem, rng: &mut Rng, tol: &Tolerances) -> Result<bool> {
    let k1 = kcf_structure(&d.pencil(1)?, rng, tol)?;
    let k2 = kcf_structure(&d.pencil(2)?, rng, tol)?;
    Ok(k1.bundle(tol) == k2.bundle(tol))
}
