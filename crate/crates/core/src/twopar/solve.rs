//! Eigenvalues of the operator-determinant pair and their relation to the
//! two-parameter problem.

use num_complex::Complex64 as C64;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::poly::{char_poly, coprime_test, on_common_factor, BivarPoly};
use super::{build_deltas, derotate, rotate, DeltaSystem, TwoParameterProblem};
use crate::matcore::{kron_vec, svd, CMatrix, CVector, Subspace};
use crate::pencil::{kcf_structure, regular_eigen_candidates};
use crate::{rng_from_seed, Error, Result, Rng, Tolerances};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum RotateMode {
    /// A seeded random angle.
    Auto,
    None,
    Angle(f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveOptions {
    pub rotate: RotateMode,
    pub seed: u64,
    pub tol: Tolerances,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            rotate: RotateMode::Auto,
            seed: 1,
            tol: Tolerances::default(),
        }
    }
}

/// A common eigenvalue of `Δ₁ − λΔ₀` and `Δ₂ − μΔ₀` in the original
/// coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Eigenvalue2P {
    pub lambda: C64,
    pub mu: C64,
    pub x1: Option<CVector>,
    pub x2: Option<CVector>,
    /// Unit common regular eigenvector.
    pub z: CVector,
    pub on_common_factor: bool,
    /// Dimension of the part of `ker(Δ₁−λΔ₀) ∩ ker(Δ₂−μΔ₀)` outside the
    /// reducing subspaces.
    pub multiplicity_hint: usize,
    /// `max_i ‖W_i x_i‖ / (s_i ‖x_i‖)` with `s_i = ‖A_i‖ + (1+|λ|)‖B_i‖ + (1+|μ|)‖C_i‖`, when `x1`, `x2` are present.
    pub residual: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveDiagnostics {
    pub phi: f64,
    pub nrank1: usize,
    pub nrank2: usize,
    pub kcf1: Option<String>,
    pub kcf2: Option<String>,
    pub r1_dim: usize,
    pub r2_dim: usize,
    pub r_equal: bool,
    pub same_bundle: Option<bool>,
    pub coprime: bool,
    pub common_degree: usize,
    pub seed: u64,
    pub tolerances: Tolerances,
    /// Some diagnostic could not be settled at the current tolerances.
    pub ambiguous: bool,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveResult {
    pub eigenvalues: Vec<Eigenvalue2P>,
    pub diagnostics: SolveDiagnostics,
}

fn characteristic_pair(
    p: &TwoParameterProblem,
    rng: &mut Rng,
    tol: &Tolerances,
) -> Result<[BivarPoly; 2]> {
    let p1 = char_poly(p, 1, rng, tol)?;
    let p2 = char_poly(p, 2, rng, tol)?;
    for (i, q) in [&p1, &p2].into_iter().enumerate() {
        if q.is_zero() {
            return Err(Error::NonRegularW(i + 1));
        }
    }
    Ok([p1, p2])
}

/// Finite eigenvalues of the `Δ` pair: all pairings of eigenvalues of the
/// two pencils whose joint kernel has a vector outside both reducing
/// subspaces.
pub fn solve(p: &TwoParameterProblem, opts: &SolveOptions) -> Result<SolveResult> {
    let tol = &opts.tol;
    let mut rng = rng_from_seed(opts.seed);
    let polys = characteristic_pair(p, &mut rng, tol)?;
    let cop = coprime_test(&polys[0], &polys[1], &mut rng, tol)?;
    let phi = match opts.rotate {
        RotateMode::Auto => rng.random::<f64>() * std::f64::consts::TAU,
        RotateMode::None => 0.0,
        RotateMode::Angle(a) => a.rem_euclid(std::f64::consts::TAU),
    };
    let q = rotate(p, phi);
    let d = build_deltas(&q, &mut rng, tol)?;
    let pen1 = d.pencil(1)?;
    let pen2 = d.pencil(2)?;
    let lambdas = regular_eigen_candidates(&pen1, &mut rng, tol)?;
    let mus = regular_eigen_candidates(&pen2, &mut rng, tol)?;

    let mut eigenvalues = Vec::new();
    for l in &lambdas {
        let k1 = pen1.kernel_at(l.lambda, tol);
        for m in &mus {
            let k2 = pen2.kernel_at(m.lambda, tol);
            let k = k1.intersect(&k2)?;
            if k.is_zero() {
                continue;
            }
            let in1 = k.intersect(&d.r1)?;
            let in2 = k.intersect(&d.r2)?;
            if in1.dim() == k.dim() || in2.dim() == k.dim() {
                continue;
            }
            let (lambda, mu) = derotate(phi, (l.lambda, m.lambda));
            let (z, x1, x2, residual) = eigenvector(p, &d, &k, &in1, &in2, (lambda, mu), tol)?;
            let flag = cop.common_degree > 0
                && on_common_factor(&polys[0], &polys[1], (lambda, mu), &mut rng, tol)?;
            eigenvalues.push(Eigenvalue2P {
                lambda,
                mu,
                x1,
                x2,
                z,
                on_common_factor: flag,
                multiplicity_hint: k.dim() - in1.dim().max(in2.dim()),
                residual,
            });
        }
    }
    eigenvalues.sort_by(|a, b| {
        let key = |e: &Eigenvalue2P| [e.lambda.re, e.lambda.im, e.mu.re, e.mu.im];
        let (ka, kb) = (key(a), key(b));
        ka.iter()
            .zip(&kb)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });

    let mut notes = Vec::new();
    let mut ambiguous = false;
    let mut kcf = |i: usize, rng: &mut Rng| match kcf_structure(&d.pencil(i).unwrap(), rng, tol) {
        Ok(s) => Some(s),
        Err(e) => {
            ambiguous |= e.is_ambiguity();
            notes.push(format!("KCF of pencil {i}: {e}"));
            None
        }
    };
    let s1 = kcf(1, &mut rng);
    let s2 = kcf(2, &mut rng);
    let same_bundle = match (&s1, &s2) {
        (Some(a), Some(b)) => Some(a.bundle(tol) == b.bundle(tol)),
        _ => None,
    };
    let r_equal = d.r1.same_as(&d.r2);
    if !r_equal {
        notes.push("reducing subspaces of the two pencils differ".into());
    }
    let diagnostics = SolveDiagnostics {
        phi,
        nrank1: d.nrank1,
        nrank2: d.nrank2,
        kcf1: s1.map(|s| s.to_string()),
        kcf2: s2.map(|s| s.to_string()),
        r1_dim: d.r1.dim(),
        r2_dim: d.r2.dim(),
        r_equal,
        same_bundle,
        coprime: cop.coprime,
        common_degree: cop.common_degree,
        seed: opts.seed,
        tolerances: *tol,
        ambiguous,
        notes,
    };
    Ok(SolveResult {
        eigenvalues,
        diagnostics,
    })
}

/// `‖W_i x‖` relative to `‖x‖` and the scale of the whole pencil (the
/// matrix itself is nearly singular at the point).
fn w_residual(p: &TwoParameterProblem, i: usize, point: (C64, C64), x: &CVector) -> Result<f64> {
    let w = p.w(i, point.0, point.1)?;
    let scale = p.w_scale(i, point.0, point.1)?.max(f64::MIN_POSITIVE) * x.norm();
    Ok((&w * x).norm() / scale)
}

type EigenVectors = (CVector, Option<CVector>, Option<CVector>, Option<f64>);

/// A regular vector of `k`, preferably decomposable as `x1 ⊗ x2`.
fn eigenvector(
    p: &TwoParameterProblem,
    d: &DeltaSystem,
    k: &Subspace,
    in1: &Subspace,
    in2: &Subspace,
    point: (C64, C64),
    tol: &Tolerances,
) -> Result<EigenVectors> {
    let regular = |z: &CVector| -> Result<bool> {
        Ok(k.contains(z)? && !d.r1.contains(z)? && !d.r2.contains(z)?)
    };
    let accept = |x1: CVector, x2: CVector| -> Result<Option<EigenVectors>> {
        let z = kron_vec(&x1, &x2).normalize();
        let res = w_residual(p, 1, point, &x1)?.max(w_residual(p, 2, point, &x2)?);
        if res <= tol.cluster && regular(&z)? {
            Ok(Some((
                z,
                Some(x1.normalize()),
                Some(x2.normalize()),
                Some(res),
            )))
        } else {
            Ok(None)
        }
    };

    let ker1 = p.w_kernel(1, point.0, point.1, tol)?;
    let ker2 = p.w_kernel(2, point.0, point.1, tol)?;
    for a in 0..ker1.dim() {
        for b in 0..ker2.dim() {
            let x1 = ker1.basis().column(a).into_owned();
            let x2 = ker2.basis().column(b).into_owned();
            if let Some(found) = accept(x1, x2)? {
                return Ok(found);
            }
        }
    }

    // Directions of k outside both reducing parts, best one first.
    let inside = Subspace::union(&[in1.clone(), in2.clone()])?;
    let outside = k.complement_of(&inside)?;
    let z = if outside.is_zero() {
        (0..k.dim())
            .map(|j| k.basis().column(j).into_owned())
            .max_by(|u, v| {
                let gap = |z: &CVector| {
                    d.r1.distance(z)
                        .unwrap_or(0.0)
                        .min(d.r2.distance(z).unwrap_or(0.0))
                };
                gap(u).total_cmp(&gap(v))
            })
            .ok_or_else(|| Error::Numerical("empty joint kernel".into()))?
    } else {
        outside.basis().column(0).into_owned()
    };
    let (n1, n2) = (p.n1(), p.n2());
    let zmat = CMatrix::from_fn(n1, n2, |i, j| z[i * n2 + j]);
    let f = svd(&zmat);
    let x1 = f.u.column(0) * C64::from(f.singular_values[0]);
    let x2 = f.v.column(0).map(|c| c.conj());
    if let Some(found) = accept(x1, x2)? {
        return Ok(found);
    }
    Ok((z.normalize(), None, None, None))
}

/// Classification of a point against the definition of a finite eigenvalue
/// of `W`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WVerdict {
    Eigenvalue(bool),
    /// The point lies on a common factor of `p₁` and `p₂`, where the
    /// definition does not apply.
    OnCommonFactor,
}

/// Whether both `W_i(λ₀, μ₀)` are singular at a point off the common
/// factors.
pub fn verify_w_eigenvalue(
    p: &TwoParameterProblem,
    point: (C64, C64),
    rng: &mut Rng,
    tol: &Tolerances,
) -> Result<WVerdict> {
    let polys = characteristic_pair(p, rng, tol)?;
    let cop = coprime_test(&polys[0], &polys[1], rng, tol)?;
    if cop.common_degree > 0 && on_common_factor(&polys[0], &polys[1], point, rng, tol)? {
        return Ok(WVerdict::OnCommonFactor);
    }
    let k1 = p.w_kernel(1, point.0, point.1, tol)?;
    let k2 = p.w_kernel(2, point.0, point.1, tol)?;
    Ok(WVerdict::Eigenvalue(!k1.is_zero() && !k2.is_zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::diag;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn diagonal_common_factor_points() {
        let p = super::super::tests::diagonal_common();
        for rotate in [RotateMode::None, RotateMode::Auto, RotateMode::Angle(0.4)] {
            let r = solve(
                &p,
                &SolveOptions {
                    rotate,
                    ..Default::default()
                },
            )
            .unwrap();
            let got: Vec<(C64, C64)> = r.eigenvalues.iter().map(|e| (e.lambda, e.mu)).collect();
            assert_eq!(got.len(), 2, "{rotate:?}: {got:?}");
            assert!((got[0].0 - c(0.0)).norm() < 1e-8 && (got[0].1 - c(0.0)).norm() < 1e-8);
            assert!((got[1].0 - c(1.0)).norm() < 1e-8 && (got[1].1 - c(1.0)).norm() < 1e-8);
            assert!(r
                .eigenvalues
                .iter()
                .all(|e| e.on_common_factor && e.multiplicity_hint == 1));
            assert_eq!(r.diagnostics.common_degree, 1);
        }
    }

    #[test]
    fn lambda_mu_point() {
        let p = super::super::tests::lambda_mu();
        let r = solve(&p, &SolveOptions::default()).unwrap();
        assert_eq!(r.eigenvalues.len(), 1);
        let e = &r.eigenvalues[0];
        assert!(e.lambda.norm() < 1e-8 && e.mu.norm() < 1e-8);
        assert!(!e.on_common_factor);
        assert!(e.residual.unwrap() < 1e-8);
        let mut rng = rng_from_seed(3);
        let tol = Tolerances::default();
        assert_eq!(
            verify_w_eigenvalue(&p, (c(0.0), c(0.0)), &mut rng, &tol).unwrap(),
            WVerdict::Eigenvalue(true)
        );
        assert_eq!(
            verify_w_eigenvalue(&p, (c(1.0), c(0.0)), &mut rng, &tol).unwrap(),
            WVerdict::Eigenvalue(false)
        );
    }

    #[test]
    fn nonregular_w_rejected() {
        let z = CMatrix::zeros(1, 1);
        let p = TwoParameterProblem::new(
            [z.clone(), z.clone(), z.clone()],
            [diag(&[0.0]), diag(&[0.0]), diag(&[1.0])],
        )
        .unwrap();
        assert!(matches!(
            solve(&p, &SolveOptions::default()),
            Err(Error::NonRegularW(1))
        ));
    }

    #[test]
    fn diagonal_point_on_common_factor() {
        let p = super::super::tests::diagonal_common();
        let mut rng = rng_from_seed(4);
        let tol = Tolerances::default();
        assert_eq!(
            verify_w_eigenvalue(&p, (c(0.0), c(0.0)), &mut rng, &tol).unwrap(),
            WVerdict::OnCommonFactor
        );
    }
}
