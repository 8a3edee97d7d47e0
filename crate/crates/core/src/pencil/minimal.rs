//! Minimal polynomial bases of the right kernel, generic kernels and the
//! minimal reducing subspace.

use num_complex::Complex64 as C64;

use super::{normal_rank, MatrixPencil};
use crate::matcore::{nullspace, CMatrix, CVector, Subspace};
use crate::{Error, Result, Rng, Tolerances};

/// `p(λ) = p₀ + λp₁ + … + λᵈp_d` with `(A − λB)p(λ) ≡ 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct MinimalBasisVector {
    pub degree: usize,
    pub coefficients: Vec<CVector>,
}

impl MinimalBasisVector {
    pub fn eval(&self, lambda: C64) -> CVector {
        let n = self.coefficients[0].len();
        let mut acc = CVector::zeros(n);
        for c in self.coefficients.iter().rev() {
            acc = acc * lambda + c;
        }
        acc
    }

    /// Largest residual of `A·p₀ = 0`, `A·p_{i+1} = B·p_i`, `B·p_d = 0`,
    /// relative to `‖(A, B)‖` and the coefficient size.
    pub fn residual(&self, p: &MatrixPencil) -> f64 {
        let size: f64 = self
            .coefficients
            .iter()
            .map(|c| c.norm_squared())
            .sum::<f64>()
            .sqrt();
        let scale = p.scale().max(f64::MIN_POSITIVE) * size.max(f64::MIN_POSITIVE);
        let d = self.degree;
        let mut worst = (p.a() * &self.coefficients[0]).norm();
        for i in 0..d {
            let r = p.a() * &self.coefficients[i + 1] - p.b() * &self.coefficients[i];
            worst = worst.max(r.norm());
        }
        worst = worst.max((p.b() * &self.coefficients[d]).norm());
        worst / scale
    }

    /// Kronecker chain `u_1, …, u_{d+1}` of the matching `L_d` block.
    pub fn chain(&self) -> Vec<CVector> {
        self.coefficients.iter().rev().cloned().collect()
    }
}

/// `(k+2) × (k+1)` block Toeplitz matrix whose kernel holds the stacked
/// coefficients of all polynomial kernel vectors of degree at most `k`.
fn toeplitz(p: &MatrixPencil, k: usize) -> CMatrix {
    let (m, n) = (p.rows(), p.cols());
    let mut t = CMatrix::zeros((k + 2) * m, (k + 1) * n);
    for j in 0..=k {
        t.view_mut((j * m, j * n), (m, n)).copy_from(p.a());
        t.view_mut(((j + 1) * m, j * n), (m, n))
            .copy_from(&(-p.b()));
    }
    t
}

fn shifted(v: &MinimalBasisVector, offset: usize, k: usize, n: usize) -> CVector {
    let mut out = CVector::zeros((k + 1) * n);
    for (i, c) in v.coefficients.iter().enumerate() {
        out.rows_mut((offset + i) * n, n).copy_from(c);
    }
    out
}

/// Minimal basis of the right polynomial kernel, degrees nondecreasing.
///
/// At degree `k` the kernel of the Toeplitz matrix is split into the shifts
/// `λʲp(λ)` of the vectors already found and a complement; every complement
/// direction is a new basis vector of degree exactly `k`.
pub fn minimal_basis(
    p: &MatrixPencil,
    rng: &mut Rng,
    tol: &Tolerances,
) -> Result<Vec<MinimalBasisVector>> {
    let n = p.cols();
    let s = n - normal_rank(p, rng, tol)?;
    minimal_basis_with_count(p, s, tol)
}

pub(crate) fn minimal_basis_with_count(
    p: &MatrixPencil,
    s: usize,
    tol: &Tolerances,
) -> Result<Vec<MinimalBasisVector>> {
    let n = p.cols();
    let mut found: Vec<MinimalBasisVector> = Vec::new();
    if s == 0 {
        return Ok(found);
    }
    for k in 0..=n {
        let ker = nullspace(&toeplitz(p, k), tol);
        let shifts: Vec<CVector> = found
            .iter()
            .flat_map(|v| (0..=k - v.degree).map(move |j| shifted(v, j, k, n)))
            .collect();
        let old = if shifts.is_empty() {
            Subspace::zero((k + 1) * n, tol.subspace)
        } else {
            Subspace::span(&shifts, tol.subspace)
        };
        if old.dim() != shifts.len() || ker.dim() < old.dim() {
            return Err(Error::ToleranceAmbiguity(format!(
                "minimal basis: degree {k} kernel has dimension {} below the {} known shifts",
                ker.dim(),
                shifts.len()
            )));
        }
        let fresh = ker.complement_of(&old)?;
        if fresh.dim() != ker.dim() - old.dim() || found.len() + fresh.dim() > s {
            return Err(Error::ToleranceAmbiguity(format!(
                "minimal basis: inconsistent kernel growth at degree {k}"
            )));
        }
        for j in 0..fresh.dim() {
            let col = fresh.basis().column(j);
            let coefficients = (0..=k).map(|i| col.rows(i * n, n).into_owned()).collect();
            found.push(MinimalBasisVector {
                degree: k,
                coefficients,
            });
        }
        if found.len() == s {
            return Ok(found);
        }
    }
    Err(Error::ToleranceAmbiguity(format!(
        "minimal basis: found {} of {s} vectors",
        found.len()
    )))
}

/// `span{p_k(λ0)}` over a computed minimal basis.
pub fn generic_kernel_of(
    basis: &[MinimalBasisVector],
    n: usize,
    lambda0: C64,
    tol: &Tolerances,
) -> Subspace {
    if basis.is_empty() {
        return Subspace::zero(n, tol.subspace);
    }
    let vals: Vec<CVector> = basis.iter().map(|v| v.eval(lambda0).normalize()).collect();
    Subspace::span(&vals, tol.subspace)
}

/// Generic kernel of `A − λB` at `λ0`.
pub fn generic_kernel(
    p: &MatrixPencil,
    lambda0: C64,
    rng: &mut Rng,
    tol: &Tolerances,
) -> Result<Subspace> {
    if !lambda0.re.is_finite() || !lambda0.im.is_finite() {
        return Err(Error::NonFinite("evaluation point".into()));
    }
    let basis = minimal_basis(p, rng, tol)?;
    Ok(generic_kernel_of(&basis, p.cols(), lambda0, tol))
}

/// Minimal reducing subspace from an already computed minimal basis,
/// cross-checked against a union of generic kernels at random shifts.
pub(crate) fn minimal_reducing_of(
    p: &MatrixPencil,
    basis: &[MinimalBasisVector],
    rng: &mut Rng,
    tol: &Tolerances,
) -> Result<Subspace> {
    let n = p.cols();
    if basis.is_empty() {
        return Ok(Subspace::zero(n, tol.subspace));
    }
    let coeffs: Vec<CVector> = basis
        .iter()
        .flat_map(|v| v.coefficients.iter())
        .filter(|c| c.norm() > 0.0)
        .map(|c| c.normalize())
        .collect();
    let direct = Subspace::span(&coeffs, tol.subspace);
    let top = basis.iter().map(|v| v.degree).max().unwrap_or(0);
    let kernels: Vec<Subspace> = (0..top + 2)
        .map(|_| generic_kernel_of(basis, n, p.random_shift(rng), tol))
        .collect();
    let union = Subspace::union(&kernels)?;
    if union.dim() != direct.dim() {
        return Err(Error::ToleranceAmbiguity(format!(
            "minimal reducing subspace: coefficient span has dimension {} but the union of \
             generic kernels has {}",
            direct.dim(),
            union.dim()
        )));
    }
    Ok(direct)
}

/// Minimal reducing subspace `𝓡(A, B)`.
pub fn minimal_reducing(p: &MatrixPencil, rng: &mut Rng, tol: &Tolerances) -> Result<Subspace> {
    let basis = minimal_basis(p, rng, tol)?;
    minimal_reducing_of(p, &basis, rng, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{diag, real_matrix, unit};
    use crate::rng_from_seed;

    fn delta_5_1() -> MatrixPencil {
        MatrixPencil::new(diag(&[-2.0, 0.0, 2.0, 0.0]), diag(&[0.0, -2.0, 2.0, 0.0])).unwrap()
    }

    #[test]
    fn l1_basis_is_one_lambda() {
        let mut rng = rng_from_seed(3);
        let tol = Tolerances::default();
        let p = MatrixPencil::new(
            real_matrix(1, 2, &[0.0, 1.0]),
            real_matrix(1, 2, &[1.0, 0.0]),
        )
        .unwrap();
        let basis = minimal_basis(&p, &mut rng, &tol).unwrap();
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0].degree, 1);
        // p(λ) ∝ (1, λ)
        let v = basis[0].eval(C64::new(2.0, 0.0));
        assert!((v[1] / v[0] - C64::new(2.0, 0.0)).norm() < 1e-12);
        assert!(basis[0].residual(&p) < 1e-14);
    }

    #[test]
    fn diagonal_delta_pencil() {
        let mut rng = rng_from_seed(4);
        let tol = Tolerances::default();
        let p = delta_5_1();
        let basis = minimal_basis(&p, &mut rng, &tol).unwrap();
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0].degree, 0);
        let g = generic_kernel(&p, C64::new(0.3, -1.0), &mut rng, &tol).unwrap();
        assert_eq!(g.dim(), 1);
        assert!(g.contains(&unit(4, 3)).unwrap());
        let r = minimal_reducing(&p, &mut rng, &tol).unwrap();
        assert!(r.same_as(&Subspace::span(&[unit(4, 3)], 1e-8)));
    }

    #[test]
    fn regular_pencil_has_empty_basis() {
        let mut rng = rng_from_seed(5);
        let tol = Tolerances::default();
        let p = MatrixPencil::new(diag(&[1.0, 2.0]), diag(&[1.0, 1.0])).unwrap();
        assert!(minimal_basis(&p, &mut rng, &tol).unwrap().is_empty());
        assert!(minimal_reducing(&p, &mut rng, &tol).unwrap().is_zero());
        assert!(generic_kernel(&p, C64::new(1.0, 0.0), &mut rng, &tol)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn l2_chain_satisfies_recurrence() {
        let mut rng = rng_from_seed(6);
        let tol = Tolerances::default();
        let (a, b) = crate::KroneckerBlock::Right { degree: 2 }.canonical();
        let p = MatrixPencil::new(a, b).unwrap();
        let basis = minimal_basis(&p, &mut rng, &tol).unwrap();
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0].degree, 2);
        let u = basis[0].chain();
        assert!((p.b() * &u[0]).norm() < 1e-14);
        assert!((p.b() * &u[1] - p.a() * &u[0]).norm() < 1e-14);
        assert!((p.a() * &u[2]).norm() < 1e-14);
    }
}
