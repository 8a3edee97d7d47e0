//! Kronecker canonical structure from rank decisions alone.

use num_complex::Complex64 as C64;

use super::minimal::minimal_basis_with_count;
use super::spectrum::regular_eigen_candidates;
use super::{normal_rank, KroneckerBlock, KroneckerStructure, MatrixPencil};
use crate::matcore::{nullspace_abs, CMatrix};
use crate::{Error, Result, Rng, Tolerances};

/// `k × k` block lower-bidiagonal matrix with `diag` on the diagonal and
/// `sub` below it. Its kernel holds the Jordan chains of length `k`.
pub(crate) fn chain_matrix(diag: &CMatrix, sub: &CMatrix, k: usize) -> CMatrix {
    let (m, n) = diag.shape();
    let mut out = CMatrix::zeros(k * m, k * n);
    for i in 0..k {
        out.view_mut((i * m, i * n), (m, n)).copy_from(diag);
        if i > 0 {
            out.view_mut((i * m, (i - 1) * n), (m, n)).copy_from(sub);
        }
    }
    out
}

/// Absolute rank threshold for chain matrices at `alpha`: relative to the
/// pencil's scale, and loosened to the shifted tolerance for finite
/// (computed) eigenvalues.
pub(crate) fn chain_threshold(p: &MatrixPencil, alpha: Option<C64>, tol: &Tolerances) -> f64 {
    let (m, n) = (p.rows(), p.cols());
    match alpha {
        Some(a) => tol.shifted_rel(m, n) * (p.a().norm() + (1.0 + a.norm()) * p.b().norm()),
        None => tol.rank_rel(m, n) * p.scale(),
    }
}

/// Weyr counts `w_1 ≥ w_2 ≥ …` of the eigenvalue `alpha` (`None` for
/// infinity): `w_k` is the number of Jordan blocks of size at least `k`.
///
/// `s` is the number of right singular blocks, each of which adds one
/// kernel direction per chain step and is subtracted out. The counts may
/// add up to at most `budget`, the part of the regular order not yet
/// assigned to other eigenvalues; more is reported as ambiguous rather than
/// growing the chain matrices further.
pub fn weyr_counts(
    p: &MatrixPencil,
    alpha: Option<C64>,
    s: usize,
    budget: usize,
    tol: &Tolerances,
) -> Result<Vec<usize>> {
    let (diag, sub) = match alpha {
        Some(a) => (p.at(a), -p.b()),
        None => (p.b().clone(), -p.a()),
    };
    let threshold = chain_threshold(p, alpha, tol);
    let mut cumulative = vec![0usize];
    for k in 1..=p.cols() + 1 {
        let m = chain_matrix(&diag, &sub, k);
        let nullity = nullspace_abs(&m, threshold, tol.subspace).dim();
        let total = nullity.checked_sub(s * k).ok_or_else(|| {
            Error::ToleranceAmbiguity(format!(
                "chain nullity {nullity} at step {k} is below the singular contribution {}",
                s * k
            ))
        })?;
        let prev = *cumulative.last().unwrap();
        if total < prev {
            return Err(Error::ToleranceAmbiguity(
                "chain nullities are not increasing".into(),
            ));
        }
        if total == prev {
            break;
        }
        if total > budget {
            return Err(Error::ToleranceAmbiguity(format!(
                "chains of length {k} need {total} dimensions, only {budget} regular ones remain"
            )));
        }
        cumulative.push(total);
    }
    let weyr: Vec<usize> = cumulative.windows(2).map(|w| w[1] - w[0]).collect();
    if weyr.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::ToleranceAmbiguity(format!(
            "Weyr counts {weyr:?} are not nonincreasing"
        )));
    }
    Ok(weyr)
}

/// Block sizes from Weyr counts (the conjugate partition).
fn segre_from_weyr(weyr: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    for k in 0..weyr.len() {
        let next = weyr.get(k + 1).copied().unwrap_or(0);
        out.extend(std::iter::repeat_n(k + 1, weyr[k] - next));
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// Full Kronecker structure of `A − λB`.
pub fn kcf_structure(
    p: &MatrixPencil,
    rng: &mut Rng,
    tol: &Tolerances,
) -> Result<KroneckerStructure> {
    let (m, n) = (p.rows(), p.cols());
    let r = normal_rank(p, rng, tol)?;
    let s = n - r;
    let sl = m - r;
    let mut blocks = Vec::new();
    for v in minimal_basis_with_count(p, s, tol)? {
        blocks.push(KroneckerBlock::Right { degree: v.degree });
    }
    for v in minimal_basis_with_count(&p.transpose(), sl, tol)? {
        blocks.push(KroneckerBlock::Left { degree: v.degree });
    }
    let singular: usize = blocks.iter().map(|b| b.cols()).sum();
    let mut budget = n.checked_sub(singular).ok_or_else(|| {
        Error::ToleranceAmbiguity(format!("singular blocks need {singular} of {n} columns"))
    })?;
    let weyr = weyr_counts(p, None, s, budget, tol)?;
    budget -= weyr.iter().sum::<usize>();
    for size in segre_from_weyr(&weyr) {
        blocks.push(KroneckerBlock::Infinite { size });
    }
    for ev in regular_eigen_candidates(p, rng, tol)? {
        let weyr = weyr_counts(p, Some(ev.lambda), s, budget, tol)?;
        budget -= weyr.iter().sum::<usize>();
        for size in segre_from_weyr(&weyr) {
            blocks.push(KroneckerBlock::Finite {
                alpha: ev.lambda,
                size,
            });
        }
    }
    let found = KroneckerStructure::from_blocks(blocks);
    if (found.rows, found.cols) != (m, n) {
        return Err(Error::ToleranceAmbiguity(format!(
            "blocks {found} tile {}×{} instead of {m}×{n}",
            found.rows, found.cols
        )));
    }
    Ok(KroneckerStructure {
        rows: m,
        cols: n,
        blocks: found.blocks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::diag;
    use crate::rng_from_seed;

    #[test]
    fn conjugate_partition() {
        assert_eq!(segre_from_weyr(&[3, 2, 2, 1]), vec![4, 3, 1]);
        assert_eq!(segre_from_weyr(&[1, 1, 1, 1]), vec![4]);
        assert!(segre_from_weyr(&[]).is_empty());
    }

    #[test]
    fn diagonal_delta_pencil_structure() {
        let mut rng = rng_from_seed(7);
        let tol = Tolerances::default();
        let p =
            MatrixPencil::new(diag(&[-2.0, 0.0, 2.0, 0.0]), diag(&[0.0, -2.0, 2.0, 0.0])).unwrap();
        let k = kcf_structure(&p, &mut rng, &tol).unwrap();
        assert_eq!(k.to_string(), "L0+L0T+J1(1)+J1(0)+N1");
    }

    #[test]
    fn identity_pencil() {
        let mut rng = rng_from_seed(8);
        let tol = Tolerances::default();
        let p = MatrixPencil::new(CMatrix::identity(2, 2), CMatrix::identity(2, 2)).unwrap();
        assert_eq!(
            kcf_structure(&p, &mut rng, &tol).unwrap().to_string(),
            "2*J1(1)"
        );
    }

    #[test]
    fn canonical_blocks_round_trip() {
        let tol = Tolerances::default();
        for (seed, s) in [
            "L2+L1T+J2(0.5)+N2",
            "J3(-1)+J1(-1)+J2(2)",
            "L0+L0+N3",
            "L1T+L1T",
        ]
        .iter()
        .enumerate()
        {
            let mut rng = rng_from_seed(seed as u64);
            let k: KroneckerStructure = s.parse().unwrap();
            let (a, b) = k.canonical();
            let p = MatrixPencil::new(a, b).unwrap();
            let got = kcf_structure(&p, &mut rng, &tol).unwrap();
            assert!(got.same_as(&k, &tol), "{s} gave {got}");
        }
    }
}
