//! Dense complex matrix primitives shared by every other module.

mod qz;
mod subspace;
mod svd;

pub use qz::{qz_eigenvalues, shifted_spectrum, ShiftedSpectrum};
pub use subspace::Subspace;
pub use svd::{svd, Svd};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rand::Rng as _;
use rand_distr::StandardNormal;

use crate::{Error, Result, Rng, Tolerances};

pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub(crate) const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub(crate) const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Kronecker product; the `(i, j)` block of the result is `a[(i, j)] · b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Kronecker product of two vectors, `x ⊗ y`.
pub fn kron_vec(x: &CVector, y: &CVector) -> CVector {
    let mut out = CVector::zeros(x.len() * y.len());
    for (i, xi) in x.iter().enumerate() {
        for (j, yj) in y.iter().enumerate() {
            out[i * y.len() + j] = xi * yj;
        }
    }
    out
}

/// The `i`-th standard basis vector of length `n`.
pub fn unit(n: usize, i: usize) -> CVector {
    let mut v = CVector::zeros(n);
    v[i] = ONE;
    v
}

pub fn is_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Singular values in nonincreasing order. Empty matrices have none.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut s = svd(m).singular_values;
    s.truncate(m.nrows().min(m.ncols()));
    s
}

/// Number of singular values above `rel · σ_max`.
pub fn rank_rel(m: &CMatrix, rel: f64) -> usize {
    let s = singular_values(m);
    match s.first() {
        None => 0,
        Some(&smax) if smax == 0.0 => 0,
        Some(&smax) => s.iter().filter(|&&x| x > rel * smax).count(),
    }
}

/// Rank under the policy's default relative threshold.
pub fn rank_tol(m: &CMatrix, tol: &Tolerances) -> usize {
    rank_rel(m, tol.rank_rel(m.nrows(), m.ncols()))
}

/// Full right singular basis `V` (columns) and the singular values of `m`.
fn full_right_svd(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let d = svd(m);
    (d.singular_values, d.v)
}

/// Orthonormal basis of the right kernel of `m`, rank decided at
/// `rel · σ_max`. The returned subspace carries `sub_tol` for containment.
pub fn nullspace_rel(m: &CMatrix, rel: f64, sub_tol: f64) -> Subspace {
    kernel_by(m, |smax| rel * smax, sub_tol)
}

/// Right kernel keeping directions with singular value at most `threshold`.
/// For matrices that are a small perturbation of a singular one, where the
/// own largest singular value is no reference scale.
pub fn nullspace_abs(m: &CMatrix, threshold: f64, sub_tol: f64) -> Subspace {
    kernel_by(m, |_| threshold, sub_tol)
}

fn kernel_by(m: &CMatrix, threshold: impl Fn(f64) -> f64, sub_tol: f64) -> Subspace {
    let (r, c) = m.shape();
    if c == 0 {
        return Subspace::zero(0, sub_tol);
    }
    if r == 0 {
        return Subspace::full(c, sub_tol);
    }
    let (s, v) = full_right_svd(m);
    let smax = s.first().copied().unwrap_or(0.0);
    let thr = threshold(smax);
    let rank = if smax == 0.0 {
        0
    } else {
        s.iter().filter(|&&x| x > thr).count()
    };
    Subspace::from_orthonormal(v.columns(rank, c - rank).into_owned(), sub_tol)
}

/// Right kernel under the policy's default relative threshold.
pub fn nullspace(m: &CMatrix, tol: &Tolerances) -> Subspace {
    nullspace_rel(m, tol.rank_rel(m.nrows(), m.ncols()), tol.subspace)
}

/// Right kernel at a computed (inexact) shift.
pub fn nullspace_shifted(m: &CMatrix, tol: &Tolerances) -> Subspace {
    nullspace_rel(m, tol.shifted_rel(m.nrows(), m.ncols()), tol.subspace)
}

/// Orthonormal basis of the column space of `m` at relative threshold `rel`.
pub fn orth_rel(m: &CMatrix, rel: f64) -> CMatrix {
    let (r, c) = m.shape();
    if r == 0 || c == 0 {
        return CMatrix::zeros(r, 0);
    }
    let d = svd(m);
    let smax = d.singular_values[0];
    let rank = if smax == 0.0 {
        0
    } else {
        d.singular_values
            .iter()
            .filter(|&&x| x > rel * smax)
            .count()
    };
    d.u.columns(0, rank).into_owned()
}

/// Matrix of i.i.d. standard complex Gaussian entries.
pub fn random_matrix(rng: &mut Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| random_complex(rng))
}

pub fn random_vector(rng: &mut Rng, n: usize) -> CVector {
    CVector::from_fn(n, |_, _| random_complex(rng))
}

pub fn random_complex(rng: &mut Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Haar-like random unitary from the QR factor of a Gaussian matrix.
pub fn random_unitary(rng: &mut Rng, n: usize) -> CMatrix {
    if n == 0 {
        return CMatrix::zeros(0, 0);
    }
    random_matrix(rng, n, n).qr().q()
}

/// `n × k` matrix with orthonormal random columns.
pub fn random_orthonormal(rng: &mut Rng, n: usize, k: usize) -> CMatrix {
    random_unitary(rng, n).columns(0, k).into_owned()
}

/// Random nonsingular matrix with 2-norm condition number at most `cond`.
pub fn random_well_conditioned(rng: &mut Rng, n: usize, cond: f64) -> CMatrix {
    let u = random_unitary(rng, n);
    let v = random_unitary(rng, n);
    let d = CMatrix::from_diagonal(&CVector::from_fn(n, |_, _| {
        C64::new(1.0 + rng.random::<f64>() * (cond - 1.0), 0.0)
    }));
    u * d * v.adjoint()
}

/// Vertically stacks matrices with equal column counts.
pub fn vstack(blocks: &[&CMatrix]) -> Result<CMatrix> {
    let cols = blocks.first().map_or(0, |b| b.ncols());
    if blocks.iter().any(|b| b.ncols() != cols) {
        return Err(Error::Dimension("vstack column counts differ".into()));
    }
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = CMatrix::zeros(rows, cols);
    let mut at = 0;
    for b in blocks {
        out.view_mut((at, 0), b.shape()).copy_from(*b);
        at += b.nrows();
    }
    Ok(out)
}

/// Horizontally stacks matrices with equal row counts.
pub fn hstack(blocks: &[&CMatrix]) -> Result<CMatrix> {
    let rows = blocks.first().map_or(0, |b| b.nrows());
    if blocks.iter().any(|b| b.nrows() != rows) {
        return Err(Error::Dimension("hstack row counts differ".into()));
    }
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = CMatrix::zeros(rows, cols);
    let mut at = 0;
    for b in blocks {
        out.view_mut((0, at), b.shape()).copy_from(*b);
        at += b.ncols();
    }
    Ok(out)
}

/// Block-diagonal matrix from the given blocks (blocks may be empty in one
/// dimension, as for `L_0` and `L_0^T`).
pub fn block_diag(blocks: &[CMatrix]) -> CMatrix {
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = CMatrix::zeros(rows, cols);
    let (mut r, mut c) = (0, 0);
    for b in blocks {
        out.view_mut((r, c), b.shape()).copy_from(b);
        r += b.nrows();
        c += b.ncols();
    }
    out
}

/// Matrix from a row-major slice of real numbers.
pub fn real_matrix(rows: usize, cols: usize, entries: &[f64]) -> CMatrix {
    assert_eq!(entries.len(), rows * cols);
    CMatrix::from_row_iterator(rows, cols, entries.iter().map(|&x| C64::new(x, 0.0)))
}

pub fn diag(entries: &[f64]) -> CMatrix {
    CMatrix::from_diagonal(&CVector::from_iterator(
        entries.len(),
        entries.iter().map(|&x| C64::new(x, 0.0)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng_from_seed;

    #[test]
    fn kron_identity_and_scalar_factor() {
        let i2 = CMatrix::identity(2, 2);
        assert_eq!(kron(&i2, &i2), CMatrix::identity(4, 4));
        let a = real_matrix(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let b = real_matrix(1, 1, &[2.0]);
        assert_eq!(kron(&a, &b), real_matrix(2, 2, &[0.0, 2.0, 0.0, 0.0]));
    }

    #[test]
    fn kron_mixed_product() {
        let mut rng = rng_from_seed(3);
        let a = random_matrix(&mut rng, 2, 3);
        let b = random_matrix(&mut rng, 3, 2);
        let c = random_matrix(&mut rng, 3, 2);
        let d = random_matrix(&mut rng, 2, 4);
        let lhs = kron(&a, &b) * kron(&c, &d);
        let rhs = kron(&(&a * &c), &(&b * &d));
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn rank_examples() {
        let tol = Tolerances::with_rank(1e-10);
        assert_eq!(rank_tol(&diag(&[1.0, 0.0]), &tol), 1);
        assert_eq!(rank_tol(&CMatrix::zeros(3, 3), &Tolerances::default()), 0);
        assert_eq!(
            rank_tol(&diag(&[0.0, -2.0, 2.0, 0.0]), &Tolerances::default()),
            2
        );
    }

    #[test]
    fn nullspace_of_diagonal_and_identity() {
        let tol = Tolerances::default();
        let n = nullspace(&diag(&[0.0, -2.0, 2.0, 0.0]), &tol);
        assert_eq!(n.dim(), 2);
        let target = Subspace::span(&[unit(4, 0), unit(4, 3)], tol.subspace);
        assert!(n.same_as(&target));
        assert_eq!(nullspace(&CMatrix::identity(3, 3), &tol).dim(), 0);
        assert_eq!(nullspace(&CMatrix::zeros(4, 4), &tol).dim(), 4);
    }

    #[test]
    fn nullspace_of_wide_matrix() {
        let mut rng = rng_from_seed(5);
        let m = random_matrix(&mut rng, 2, 5);
        let n = nullspace(&m, &Tolerances::default());
        assert_eq!(n.dim(), 3);
        assert!((&m * n.basis()).norm() < 1e-12);
    }

    #[test]
    fn well_conditioned_bound() {
        let mut rng = rng_from_seed(8);
        let p = random_well_conditioned(&mut rng, 6, 100.0);
        let s = singular_values(&p);
        assert!(s[0] / s[5] <= 100.0 + 1e-8);
    }
}
