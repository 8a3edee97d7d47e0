//! Kronecker chains: a basis of the column space adapted to the blocks.

use super::kcf::{chain_matrix, chain_threshold};
use super::minimal::minimal_basis_with_count;
use super::{KroneckerBlock, KroneckerStructure, MatrixPencil};
use crate::matcore::{hstack, nullspace_abs, rank_rel, svd, CMatrix, CVector, Subspace};
use crate::{Error, Result, Tolerances};

#[derive(Clone, Debug, PartialEq)]
pub struct KroneckerChain {
    pub block: KroneckerBlock,
    pub vectors: Vec<CVector>,
}

impl KroneckerChain {
    /// Largest residual of the block's defining recurrences, relative to
    /// the pencil scale and the chain size.
    pub fn residual(&self, p: &MatrixPencil) -> f64 {
        let (a, b) = (p.a(), p.b());
        let u = &self.vectors;
        let mut res: Vec<CVector> = Vec::new();
        let mut weight = p.scale();
        match self.block {
            KroneckerBlock::Finite { alpha, .. } => {
                let d = p.at(alpha);
                weight = a.norm() + alpha.norm() * b.norm() + b.norm();
                res.push(&d * &u[0]);
                for i in 1..u.len() {
                    res.push(&d * &u[i] - b * &u[i - 1]);
                }
            }
            KroneckerBlock::Infinite { .. } => {
                res.push(b * &u[0]);
                for i in 1..u.len() {
                    res.push(b * &u[i] - a * &u[i - 1]);
                }
            }
            KroneckerBlock::Right { .. } => {
                res.push(b * &u[0]);
                for i in 1..u.len() {
                    res.push(b * &u[i] - a * &u[i - 1]);
                }
                res.push(a * &u[u.len() - 1]);
            }
            KroneckerBlock::Left { .. } => {
                for i in 1..u.len() {
                    res.push(b * &u[i - 1] - a * &u[i]);
                }
            }
        }
        let size = u.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let worst = res.iter().map(|r| r.norm()).fold(0.0, f64::max);
        if worst == 0.0 {
            return 0.0;
        }
        worst / (weight.max(f64::MIN_POSITIVE) * size.max(f64::MIN_POSITIVE))
    }
}

fn split(col: &CVector, n: usize, k: usize) -> Vec<CVector> {
    (0..k).map(|i| col.rows(i * n, n).into_owned()).collect()
}

/// Picks `count` combinations of the columns of `z` whose image under
/// `proj` is largest.
fn top_directions(z: &CMatrix, image: &CMatrix, count: usize) -> Result<Vec<CVector>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    if image.ncols() < count {
        return Err(Error::ToleranceAmbiguity(
            "not enough kernel directions for the requested chains".into(),
        ));
    }
    let v = svd(image).v;
    Ok((0..count).map(|j| z * v.column(j)).collect())
}

fn orth_complement_projector(sub: &Subspace) -> CMatrix {
    let n = sub.ambient_dim();
    CMatrix::identity(n, n) - sub.basis() * sub.basis().adjoint()
}

/// Chains of the regular blocks at one eigenvalue: `diag`/`sub` define the
/// chain matrix, `sizes` the Segre characteristic.
fn regular_chains(
    diag: &CMatrix,
    sub: &CMatrix,
    sizes: &[usize],
    reducing: &Subspace,
    threshold: f64,
    tol: &Tolerances,
) -> Result<Vec<Vec<CVector>>> {
    let n = diag.ncols();
    let top = sizes.iter().copied().max().unwrap_or(0);
    let mut chosen: Vec<Vec<CVector>> = Vec::new();
    for d in (1..=top).rev() {
        let count = sizes.iter().filter(|&&s| s == d).count();
        if count == 0 {
            continue;
        }
        let z = nullspace_abs(&chain_matrix(diag, sub, d), threshold, tol.subspace).into_basis();
        let mut avoid: Vec<CVector> = chosen.iter().map(|c| c[d - 1].clone()).collect();
        if d > 1 {
            let prev = nullspace_abs(&chain_matrix(diag, sub, d - 1), threshold, tol.subspace);
            let b = prev.basis();
            let last = b.rows((d - 2) * n, n);
            avoid.extend(last.column_iter().map(|c| c.into_owned()));
        }
        avoid.extend(reducing.basis().column_iter().map(|c| c.into_owned()));
        let avoid = if avoid.is_empty() {
            Subspace::zero(n, tol.subspace)
        } else {
            Subspace::span(&avoid, tol.subspace)
        };
        let proj = orth_complement_projector(&avoid);
        let image = &proj * z.rows((d - 1) * n, n);
        for col in top_directions(&z, &image, count)? {
            chosen.push(split(&col, n, d));
        }
    }
    Ok(chosen)
}

/// One chain per block of `s`, the structure previously computed for `p`.
pub fn kronecker_chains(
    p: &MatrixPencil,
    s: &KroneckerStructure,
    tol: &Tolerances,
) -> Result<Vec<KroneckerChain>> {
    let (m, n) = (p.rows(), p.cols());
    if (s.rows, s.cols) != (m, n) || !s.tiles() {
        return Err(Error::Dimension(format!(
            "structure {s} does not describe a {m}×{n} pencil"
        )));
    }
    let mut chains = Vec::new();

    let right = s.right_indices();
    let basis = minimal_basis_with_count(p, right.len(), tol)?;
    let got: Vec<usize> = basis.iter().map(|v| v.degree).collect();
    if got != right {
        return Err(Error::ToleranceAmbiguity(format!(
            "minimal indices {got:?} do not match the structure's {right:?}"
        )));
    }
    for v in &basis {
        chains.push(KroneckerChain {
            block: KroneckerBlock::Right { degree: v.degree },
            vectors: v.chain(),
        });
    }
    let reducing_vectors: Vec<CVector> = chains
        .iter()
        .flat_map(|c| c.vectors.iter().map(|v| v.normalize()))
        .collect();
    let reducing = if reducing_vectors.is_empty() {
        Subspace::zero(n, tol.subspace)
    } else {
        Subspace::span(&reducing_vectors, tol.subspace)
    };

    let infinite = s.infinite_segre();
    if !infinite.is_empty() {
        let sub = -p.a();
        let thr = chain_threshold(p, None, tol);
        for vectors in regular_chains(p.b(), &sub, &infinite, &reducing, thr, tol)? {
            chains.push(KroneckerChain {
                block: KroneckerBlock::Infinite {
                    size: vectors.len(),
                },
                vectors,
            });
        }
    }
    for (alpha, sizes) in s.finite_segre(tol) {
        let sub = -p.b();
        let thr = chain_threshold(p, Some(alpha), tol);
        for vectors in regular_chains(&p.at(alpha), &sub, &sizes, &reducing, thr, tol)? {
            chains.push(KroneckerChain {
                block: KroneckerBlock::Finite {
                    alpha,
                    size: vectors.len(),
                },
                vectors,
            });
        }
    }

    let mut left = s.left_indices();
    left.retain(|&d| d > 0);
    left.sort_unstable_by(|a, b| b.cmp(a));
    let mut d_prev = None;
    for &d in &left {
        if d_prev == Some(d) {
            continue;
        }
        d_prev = Some(d);
        let count = left.iter().filter(|&&e| e == d).count();
        let taken: Vec<CVector> = chains
            .iter()
            .flat_map(|c| c.vectors.iter().map(|v| v.normalize()))
            .collect();
        let taken = if taken.is_empty() {
            Subspace::zero(n, tol.subspace)
        } else {
            Subspace::span(&taken, tol.subspace)
        };
        let proj = orth_complement_projector(&taken);
        // Rows `B u_i − A u_{i+1}`, i = 1..d−1.
        let mut k = CMatrix::zeros((d - 1) * m, d * n);
        for i in 0..d - 1 {
            k.view_mut((i * m, i * n), (m, n)).copy_from(p.b());
            k.view_mut((i * m, (i + 1) * n), (m, n))
                .copy_from(&(-p.a()));
        }
        let z = if d == 1 {
            CMatrix::identity(n, n)
        } else {
            nullspace_abs(&k, chain_threshold(p, None, tol), tol.subspace).into_basis()
        };
        let mut image = CMatrix::zeros(d * n, z.ncols());
        for i in 0..d {
            let part = &proj * z.rows(i * n, n);
            image.rows_mut(i * n, n).copy_from(&part);
        }
        for col in top_directions(&z, &image, count)? {
            chains.push(KroneckerChain {
                block: KroneckerBlock::Left { degree: d },
                vectors: split(&col, n, d),
            });
        }
    }

    for _ in s.left_indices().iter().filter(|&&d| d == 0) {
        chains.push(KroneckerChain {
            block: KroneckerBlock::Left { degree: 0 },
            vectors: Vec::new(),
        });
    }

    for c in &chains {
        let r = c.residual(p);
        if r > 1e-8 {
            return Err(Error::Numerical(format!(
                "chain of {} has residual {r:.2e}",
                c.block
            )));
        }
    }
    let columns: Vec<CMatrix> = chains
        .iter()
        .flat_map(|c| c.vectors.iter())
        .map(|v| CMatrix::from_column_slice(n, 1, v.normalize().as_slice()))
        .collect();
    let refs: Vec<&CMatrix> = columns.iter().collect();
    let stacked = if refs.is_empty() {
        CMatrix::zeros(n, 0)
    } else {
        hstack(&refs)?
    };
    if stacked.ncols() != n || rank_rel(&stacked, 1e-8) != n {
        return Err(Error::Numerical(format!(
            "chain vectors span {} of {n} dimensions",
            rank_rel(&stacked, 1e-8)
        )));
    }
    Ok(chains)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::unit;
    use num_complex::Complex64 as C64;

    #[test]
    fn canonical_jordan_block_chain() {
        let tol = Tolerances::default();
        let k: KroneckerStructure = "J2(3)".parse().unwrap();
        let (a, b) = k.canonical();
        let p = MatrixPencil::new(a, b).unwrap();
        let chains = kronecker_chains(&p, &k, &tol).unwrap();
        assert_eq!(chains.len(), 1);
        let u = &chains[0].vectors;
        // u1 ∝ e1, and u2 ≡ e2 modulo e1.
        assert!(u[0][1].norm() < 1e-12);
        assert!(u[1][1].norm() > 1e-3);
        let d = p.at(C64::new(3.0, 0.0));
        assert!((&d * &u[1] - p.b() * &u[0]).norm() < 1e-12);
        let _ = unit(2, 0);
    }

    #[test]
    fn mixed_canonical_structure_chains() {
        let tol = Tolerances::default();
        let k: KroneckerStructure = "L1+L2T+L0T+J2(1)+J1(1)+J1(-2)+N2".parse().unwrap();
        let (a, b) = k.canonical();
        let p = MatrixPencil::new(a, b).unwrap();
        let chains = kronecker_chains(&p, &k, &tol).unwrap();
        assert_eq!(chains.len(), k.blocks.len());
        for c in &chains {
            assert_eq!(c.vectors.len(), c.block.chain_len());
            assert!(c.residual(&p) < 1e-12);
        }
    }
}
