//! Finite eigenvalues of square or rectangular, possibly singular pencils
//! by random two-sided projection.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::{normal_rank, MatrixPencil};
use crate::matcore::{random_orthonormal, shifted_spectrum};
use crate::{Error, Result, Rng, Tolerances};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegularEigenvalue {
    pub lambda: C64,
    /// `dim ker(A − λB) − s`.
    pub geometric_excess: usize,
    /// Size of the eigenvalue cluster in the projected problem.
    pub algebraic: usize,
}

/// Cluster of perturbed copies of one eigenvalue of a projected pencil.
#[derive(Clone, Copy, Debug)]
struct Cluster {
    lambda: C64,
    size: usize,
}

/// Groups values whose distance is at most `rel` times the larger modulus
/// (single linkage) and averages each group.
fn clusters(values: &[C64], rel: f64) -> Vec<(C64, usize)> {
    let n = values.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn root(label: &mut [usize], mut i: usize) -> usize {
        while label[i] != i {
            label[i] = label[label[i]];
            i = label[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if (values[i] - values[j]).norm() <= rel * values[i].norm().max(values[j].norm()) {
                let (ri, rj) = (root(&mut label, i), root(&mut label, j));
                label[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let mut groups: Vec<(usize, C64, usize)> = Vec::new();
    for i in 0..n {
        let r = root(&mut label, i);
        match groups.iter_mut().find(|g| g.0 == r) {
            Some(g) => {
                g.1 += values[i];
                g.2 += 1;
            }
            None => groups.push((r, values[i], 1)),
        }
    }
    groups
        .into_iter()
        .map(|(_, sum, k)| (sum / k as f64, k))
        .collect()
}

/// Finite cluster centres of one randomly projected `r × r` pencil.
fn projected_run(
    p: &MatrixPencil,
    r: usize,
    rng: &mut Rng,
    tol: &Tolerances,
) -> Result<Vec<Cluster>> {
    let u = random_orthonormal(rng, p.rows(), r);
    let v = random_orthonormal(rng, p.cols(), r);
    let pa = u.adjoint() * p.a() * &v;
    let pb = u.adjoint() * p.b() * &v;
    let spec = shifted_spectrum(&pa, &pb, rng)?;
    let scale = spec.nu.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let radius = tol.spread * scale;
    Ok(clusters(&spec.nu, tol.spread)
        .into_iter()
        .filter(|(nu, _)| nu.norm() > radius)
        .filter_map(|(nu, size)| spec.to_lambda(nu).map(|lambda| Cluster { lambda, size }))
        .collect())
}

/// Eigenvalues present in at least two of three independent projections,
/// validated by a rank drop of `A − λB`. One run may blur a true eigenvalue
/// by pooling it with a spurious neighbour; spurious values themselves
/// differ from run to run. Works for any shape.
pub(crate) fn regular_eigen_candidates(
    p: &MatrixPencil,
    rng: &mut Rng,
    tol: &Tolerances,
) -> Result<Vec<RegularEigenvalue>> {
    let r = normal_rank(p, rng, tol)?;
    let s = p.cols() - r;
    if r == 0 {
        return Ok(Vec::new());
    }
    let mut runs = Vec::new();
    let mut last_err = None;
    for _ in 0..6 {
        match projected_run(p, r, rng, tol) {
            Ok(c) => runs.push(c),
            Err(e) => last_err = Some(e),
        }
        if runs.len() == 3 {
            break;
        }
    }
    if runs.len() < 2 {
        return Err(last_err.unwrap_or_else(|| Error::Numerical("projection method failed".into())));
    }
    // Pool matching centres across runs.
    let mut groups: Vec<(C64, usize, usize)> = Vec::new();
    for c in runs.iter().flatten() {
        match groups
            .iter_mut()
            .find(|g| tol.same_eigenvalue(g.0 / g.2 as f64, c.lambda))
        {
            Some(g) => {
                g.0 += c.lambda;
                g.1 = g.1.min(c.size);
                g.2 += 1;
            }
            None => groups.push((c.lambda, c.size, 1)),
        }
    }
    groups.sort_by(|a, b| b.2.cmp(&a.2));
    let near =
        |a: C64, b: C64| (a - b).norm() <= 1e3 * tol.cluster * 1f64.max(a.norm()).max(b.norm());
    let mut out: Vec<RegularEigenvalue> = Vec::new();
    for (sum, size, count) in groups {
        if count < 2 {
            continue;
        }
        let lambda = sum / count as f64;
        if out.iter().any(|e| near(e.lambda, lambda)) {
            continue;
        }
        let ker = p.kernel_at(lambda, tol);
        if ker.dim() > s {
            out.push(RegularEigenvalue {
                lambda,
                geometric_excess: ker.dim() - s,
                algebraic: size,
            });
        }
    }
    out.sort_by(|a, b| {
        a.lambda
            .re
            .total_cmp(&b.lambda.re)
            .then(a.lambda.im.total_cmp(&b.lambda.im))
    });
    Ok(out)
}

/// Finite eigenvalues of a square pencil: points where the rank of
/// `A − λB` drops below the normal rank.
pub fn eigenvalues_regular(
    p: &MatrixPencil,
    rng: &mut Rng,
    tol: &Tolerances,
) -> Result<Vec<RegularEigenvalue>> {
    p.require_square()?;
    regular_eigen_candidates(p, rng, tol)
}
