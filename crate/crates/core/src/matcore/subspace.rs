use super::{hstack, svd, CMatrix, CVector};
use crate::{Error, Result};

/// A subspace of `C^n` held as an orthonormal basis plus the tolerance used
/// for membership decisions (the sine of the largest admissible angle).
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    basis: CMatrix,
    tol: f64,
}

impl Subspace {
    pub fn zero(ambient: usize, tol: f64) -> Self {
        Subspace {
            basis: CMatrix::zeros(ambient, 0),
            tol,
        }
    }

    pub fn full(ambient: usize, tol: f64) -> Self {
        Subspace {
            basis: CMatrix::identity(ambient, ambient),
            tol,
        }
    }

    /// Wraps a basis already known to be orthonormal.
    pub fn from_orthonormal(basis: CMatrix, tol: f64) -> Self {
        Subspace { basis, tol }
    }

    /// Orthonormalises the column span of `m`; directions with singular value
    /// at most `tol · σ_max` are discarded.
    pub fn from_spanning(m: &CMatrix, tol: f64) -> Self {
        Subspace {
            basis: super::orth_rel(m, tol),
            tol,
        }
    }

    /// Span of a list of vectors of one common length.
    pub fn span(vectors: &[CVector], tol: f64) -> Self {
        let n = vectors.first().map_or(0, |v| v.len());
        let m = CMatrix::from_fn(n, vectors.len(), |i, j| vectors[j][i]);
        Self::from_spanning(&m, tol)
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn into_basis(self) -> CMatrix {
        self.basis
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// Orthogonal projection of `v` onto the subspace.
    pub fn project(&self, v: &CVector) -> CVector {
        &self.basis * (self.basis.adjoint() * v)
    }

    /// Relative distance `‖v − P v‖ / ‖v‖`, i.e. the sine of the angle
    /// between `v` and the subspace.
    pub fn distance(&self, v: &CVector) -> Result<f64> {
        self.check_ambient(v.len())?;
        let nv = v.norm();
        if nv == 0.0 {
            return Err(Error::Precondition("zero vector".into()));
        }
        Ok((v - self.project(v)).norm() / nv)
    }

    pub fn contains(&self, v: &CVector) -> Result<bool> {
        Ok(self.distance(v)? <= self.tol)
    }

    /// Whether every basis vector of `other` lies in `self`.
    pub fn contains_subspace(&self, other: &Subspace) -> Result<bool> {
        self.check_ambient(other.ambient_dim())?;
        for j in 0..other.dim() {
            if !self.contains(&other.basis.column(j).into_owned())? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Mutual containment.
    pub fn same_as(&self, other: &Subspace) -> bool {
        self.ambient_dim() == other.ambient_dim()
            && self.dim() == other.dim()
            && self.contains_subspace(other).unwrap_or(false)
            && other.contains_subspace(self).unwrap_or(false)
    }

    /// Sines of the principal angles from `other` to `self`: for every
    /// direction of `other`, how far it leaves `self`. Largest first.
    pub fn principal_sines(&self, other: &Subspace) -> Result<Vec<f64>> {
        self.check_ambient(other.ambient_dim())?;
        if other.dim() == 0 {
            return Ok(Vec::new());
        }
        let resid = &other.basis - &self.basis * (self.basis.adjoint() * &other.basis);
        Ok(super::singular_values(&resid))
    }

    /// Span of the union of all inputs.
    pub fn union(parts: &[Subspace]) -> Result<Subspace> {
        let first = parts
            .first()
            .ok_or_else(|| Error::Precondition("empty subspace list".into()))?;
        let n = first.ambient_dim();
        if parts.iter().any(|s| s.ambient_dim() != n) {
            return Err(Error::Dimension(
                "union of subspaces with different ambient dims".into(),
            ));
        }
        let tol = first.tol;
        let mats: Vec<&CMatrix> = parts.iter().map(|s| &s.basis).collect();
        let stacked = hstack(&mats)?;
        if stacked.ncols() == 0 {
            return Ok(Subspace::zero(n, tol));
        }
        // Orthonormal inputs: singular values are absolute scales here.
        let d = svd(&stacked);
        let rank = d.singular_values.iter().filter(|&&s| s > tol).count();
        let basis = d.u.columns(0, rank).into_owned();
        Ok(Subspace { basis, tol })
    }

    /// Intersection through principal angles: directions whose angle sine
    /// is at most the tolerance are kept.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other.ambient_dim())?;
        let n = self.ambient_dim();
        if self.dim() == 0 || other.dim() == 0 {
            return Ok(Subspace::zero(n, self.tol));
        }
        // Sines come from the residual of `other` off `self`; cosines near
        // one cannot resolve tolerances below sqrt(eps).
        let resid = &other.basis - &self.basis * (self.basis.adjoint() * &other.basis);
        let d = svd(&resid);
        let k = other.dim();
        let far = d.singular_values.iter().filter(|&&s| s > self.tol).count();
        let dirs = &other.basis * d.v.columns(far, k - far);
        Ok(Subspace::from_spanning(&dirs, self.tol))
    }

    /// Orthogonal complement of `sub` inside `self`.
    pub fn complement_of(&self, sub: &Subspace) -> Result<Subspace> {
        self.check_ambient(sub.ambient_dim())?;
        if self.dim() == 0 {
            return Ok(self.clone());
        }
        let resid = &self.basis - &sub.basis * (sub.basis.adjoint() * &self.basis);
        let d = svd(&resid);
        // Directions of self that stay outside `sub`.
        let keep = d.singular_values.iter().filter(|&&s| s > self.tol).count();
        let dirs = d.u.columns(0, keep).into_owned();
        Ok(Subspace::from_spanning(&dirs, self.tol))
    }

    fn check_ambient(&self, n: usize) -> Result<()> {
        if n != self.ambient_dim() {
            return Err(Error::Dimension(format!(
                "ambient dimension {} vs {}",
                self.ambient_dim(),
                n
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{random_matrix, unit};
    use crate::rng_from_seed;

    const TOL: f64 = 1e-8;

    fn e(n: usize, i: usize) -> CVector {
        unit(n, i)
    }

    #[test]
    fn union_of_axes() {
        let a = Subspace::span(&[e(3, 0)], TOL);
        let b = Subspace::span(&[e(3, 1)], TOL);
        let u = Subspace::union(&[a.clone(), b]).unwrap();
        assert_eq!(u.dim(), 2);
        assert!(u.contains(&e(3, 1)).unwrap());
        assert!(!u.contains(&e(3, 2)).unwrap());
        assert_eq!(Subspace::union(&[a.clone(), a.clone()]).unwrap().dim(), 1);
    }

    #[test]
    fn union_rejects_mismatched_ambient() {
        let a = Subspace::span(&[e(3, 0)], TOL);
        let b = Subspace::span(&[e(4, 0)], TOL);
        assert!(matches!(Subspace::union(&[a, b]), Err(Error::Dimension(_))));
    }

    #[test]
    fn intersect_axes() {
        let a = Subspace::span(&[e(3, 0), e(3, 1)], TOL);
        let b = Subspace::span(&[e(3, 1), e(3, 2)], TOL);
        let i = a.intersect(&b).unwrap();
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&e(3, 1)).unwrap());
        assert!(a.intersect(&a).unwrap().same_as(&a));
    }

    #[test]
    fn contains_axes_and_zero_vector() {
        let a = Subspace::span(&[e(2, 0)], TOL);
        assert!(a.contains(&e(2, 0)).unwrap());
        assert!(!a.contains(&e(2, 1)).unwrap());
        assert!(a.contains(&CVector::zeros(2)).is_err());
    }

    #[test]
    fn random_intersection_dimension_bounds() {
        let mut rng = rng_from_seed(11);
        for (k1, k2) in [(3, 4), (2, 2), (5, 4)] {
            let s1 = Subspace::from_spanning(&random_matrix(&mut rng, 6, k1), TOL);
            let s2 = Subspace::from_spanning(&random_matrix(&mut rng, 6, k2), TOL);
            let i = s1.intersect(&s2).unwrap();
            assert_eq!(i.dim(), (k1 + k2).saturating_sub(6));
            assert!(s1.contains_subspace(&i).unwrap());
            assert!(s2.contains_subspace(&i).unwrap());
        }
    }

    #[test]
    fn complement_inside() {
        let a = Subspace::span(&[e(3, 0), e(3, 1)], TOL);
        let b = Subspace::span(&[e(3, 1)], TOL);
        let c = a.complement_of(&b).unwrap();
        assert_eq!(c.dim(), 1);
        assert!(c.contains(&e(3, 0)).unwrap());
    }
}
