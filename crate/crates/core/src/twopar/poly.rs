//! Characteristic polynomials `p_i(λ, μ) = det W_i(λ, μ)` and their common
//! factors.

use num_complex::Complex64 as C64;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::TwoParameterProblem;
use crate::matcore::{qz_eigenvalues, random_complex, rank_rel, CMatrix};
use crate::{Error, Result, Rng, Tolerances};

/// `Σ c[j][k] λʲ μᵏ` with `j, k ≤ degree`.
#[derive(Clone, Debug, PartialEq)]
pub struct BivarPoly {
    pub degree: usize,
    pub coeffs: Vec<Vec<C64>>,
}

impl BivarPoly {
    pub fn eval(&self, lambda: C64, mu: C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for row in self.coeffs.iter().rev() {
            let mut inner = C64::new(0.0, 0.0);
            for c in row.iter().rev() {
                inner = inner * mu + c;
            }
            acc = acc * lambda + inner;
        }
        acc
    }

    /// `Σ |c[j][k]| |λ|ʲ |μ|ᵏ`, the natural size of a value at the point.
    pub fn magnitude(&self, lambda: C64, mu: C64) -> f64 {
        let mut acc = 0.0;
        for (j, row) in self.coeffs.iter().enumerate() {
            for (k, c) in row.iter().enumerate() {
                acc += c.norm() * lambda.norm().powi(j as i32) * mu.norm().powi(k as i32);
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().flatten().all(|c| c.norm() == 0.0)
    }

    /// Largest `j + k` with a nonzero coefficient.
    pub fn total_degree(&self) -> Option<usize> {
        let mut best = None;
        for (j, row) in self.coeffs.iter().enumerate() {
            for (k, c) in row.iter().enumerate() {
                if c.norm() > 0.0 {
                    best = best.max(Some(j + k));
                }
            }
        }
        best
    }

    fn max_coeff(&self) -> f64 {
        self.coeffs
            .iter()
            .flatten()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// Coefficients in `t` of `p(a t + b, c t + e)`, constant term first.
    pub fn restrict(&self, a: C64, b: C64, c: C64, e: C64) -> Vec<C64> {
        let d = self.degree;
        let pow = |x: C64, y: C64| {
            let mut out = vec![vec![C64::new(1.0, 0.0)]];
            for i in 1..=d {
                out.push(mul(&out[i - 1], &[y, x]));
            }
            out
        };
        let lp = pow(a, b);
        let mp = pow(c, e);
        let mut out = vec![C64::new(0.0, 0.0); 2 * d + 1];
        for (j, row) in self.coeffs.iter().enumerate() {
            for (k, coef) in row.iter().enumerate() {
                if coef.norm() == 0.0 {
                    continue;
                }
                for (i, v) in mul(&lp[j], &mp[k]).iter().enumerate() {
                    out[i] += coef * v;
                }
            }
        }
        out
    }
}

fn mul(p: &[C64], q: &[C64]) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); p.len() + q.len() - 1];
    for (i, x) in p.iter().enumerate() {
        for (j, y) in q.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn det(m: &CMatrix) -> C64 {
    if m.nrows() == 0 {
        return C64::new(1.0, 0.0);
    }
    m.clone().lu().determinant()
}

/// `det W_i(λ, μ)` by interpolation on an `(n+1) × (n+1)` grid of rotated
/// roots of unity, validated at five random points.
pub fn char_poly(
    p: &TwoParameterProblem,
    i: usize,
    rng: &mut Rng,
    tol: &Tolerances,
) -> Result<BivarPoly> {
    let n = p.parts(i)?[0].nrows();
    let mut last = 0.0;
    for _ in 0..2 {
        let theta = C64::from_polar(1.0, rng.random::<f64>() * std::f64::consts::TAU);
        let poly = interpolate(p, i, n, theta, tol)?;
        let mut worst: f64 = 0.0;
        for _ in 0..5 {
            let (l, m) = (random_complex(rng), random_complex(rng));
            let exact = det(&p.w(i, l, m)?);
            let scale = p.w_scale(i, l, m)?.powi(n as i32).max(f64::MIN_POSITIVE);
            worst = worst.max((poly.eval(l, m) - exact).norm() / scale);
        }
        if worst < 1e-8 {
            return Ok(poly);
        }
        last = worst;
    }
    Err(Error::Numerical(format!(
        "characteristic polynomial of W{i} fails its probes (relative residual {last:e})"
    )))
}

fn interpolate(
    p: &TwoParameterProblem,
    i: usize,
    n: usize,
    theta: C64,
    tol: &Tolerances,
) -> Result<BivarPoly> {
    let q = n + 1;
    let omega = |k: usize| C64::from_polar(1.0, std::f64::consts::TAU * k as f64 / q as f64);
    let mut vals = vec![vec![C64::new(0.0, 0.0); q]; q];
    for (a, row) in vals.iter_mut().enumerate() {
        for (b, v) in row.iter_mut().enumerate() {
            *v = det(&p.w(i, theta * omega(a), theta * omega(b))?);
        }
    }
    // Inverse two-dimensional DFT, then undo the node rotation.
    let mut coeffs = vec![vec![C64::new(0.0, 0.0); q]; q];
    for (j, row) in coeffs.iter_mut().enumerate() {
        for (k, c) in row.iter_mut().enumerate() {
            let mut s = C64::new(0.0, 0.0);
            for (a, vrow) in vals.iter().enumerate() {
                for (b, v) in vrow.iter().enumerate() {
                    s += v * omega((a * j + b * k) % q).conj();
                }
            }
            *c = s / (q * q) as f64 / theta.powi((j + k) as i32);
        }
    }
    let mut poly = BivarPoly { degree: n, coeffs };
    let cut = tol.poly * poly.max_coeff();
    for c in poly.coeffs.iter_mut().flatten() {
        if c.norm() <= cut {
            *c = C64::new(0.0, 0.0);
        }
    }
    Ok(poly)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoprimeReport {
    pub coprime: bool,
    /// Degree of the greatest common divisor.
    pub common_degree: usize,
}

/// Drops leading coefficients below `rel` times the largest one.
fn trim(mut f: Vec<C64>, rel: f64) -> Vec<C64> {
    let cut = rel * f.iter().map(|c| c.norm()).fold(0.0, f64::max);
    while f.len() > 1 && f.last().is_some_and(|c| c.norm() <= cut) {
        f.pop();
    }
    f
}

/// Degree of the GCD of two univariate polynomials from the rank deficiency
/// of their Sylvester matrix.
fn gcd_degree(f: &[C64], g: &[C64], rel: f64) -> usize {
    let (m, k) = (f.len() - 1, g.len() - 1);
    if m == 0 || k == 0 {
        return 0;
    }
    let nf = f.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let ng = g.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let size = m + k;
    let mut s = CMatrix::zeros(size, size);
    for r in 0..k {
        for (i, c) in f.iter().rev().enumerate() {
            s[(r, r + i)] = c / nf;
        }
    }
    for r in 0..m {
        for (i, c) in g.iter().rev().enumerate() {
            s[(k + r, r + i)] = c / ng;
        }
    }
    size - rank_rel(&s, rel)
}

fn random_line(rng: &mut Rng) -> [C64; 4] {
    [
        random_complex(rng),
        random_complex(rng),
        random_complex(rng),
        random_complex(rng),
    ]
}

/// Common factor degree of `p1` and `p2` read off their restrictions to
/// random lines.
pub fn coprime_test(
    p1: &BivarPoly,
    p2: &BivarPoly,
    rng: &mut Rng,
    tol: &Tolerances,
) -> Result<CoprimeReport> {
    if p1.is_zero() || p2.is_zero() {
        return Err(Error::Precondition("identically zero polynomial".into()));
    }
    let draw = |rng: &mut Rng| -> Vec<usize> {
        (0..3)
            .map(|_| {
                let [a, b, c, e] = random_line(rng);
                let f = trim(p1.restrict(a, b, c, e), tol.poly);
                let g = trim(p2.restrict(a, b, c, e), tol.poly);
                gcd_degree(&f, &g, tol.poly)
            })
            .collect()
    };
    let mut degs = draw(rng);
    if degs.iter().any(|&d| d != degs[0]) {
        degs = draw(rng);
        if degs.iter().any(|&d| d != degs[0]) {
            return Err(Error::ToleranceAmbiguity(format!(
                "common factor degree differs across lines: {degs:?}"
            )));
        }
    }
    Ok(CoprimeReport {
        coprime: degs[0] == 0,
        common_degree: degs[0],
    })
}

/// Roots of a univariate polynomial (constant term first) as the
/// eigenvalues of its companion matrix.
fn roots(f: &[C64]) -> Result<Vec<C64>> {
    let d = f.len() - 1;
    if d == 0 {
        return Ok(Vec::new());
    }
    let lead = f[d];
    let mut comp = CMatrix::zeros(d, d);
    for i in 1..d {
        comp[(i, i - 1)] = C64::new(1.0, 0.0);
    }
    for i in 0..d {
        comp[(i, d - 1)] = -f[i] / lead;
    }
    Ok(qz_eigenvalues(&comp, &CMatrix::identity(d, d))?
        .into_iter()
        .map(|(a, b)| a / b)
        .collect())
}

fn horner(f: &[C64], t: C64) -> C64 {
    f.iter()
        .rev()
        .fold(C64::new(0.0, 0.0), |acc, c| acc * t + c)
}

fn horner_magnitude(f: &[C64], t: C64) -> f64 {
    f.iter().rev().fold(0.0, |acc, c| acc * t.norm() + c.norm())
}

/// Whether a curve of common zeros of `p1` and `p2` passes through `point`.
///
/// Lines passing at distance `δ = neighbourhood · max(1, |λ₀|, |μ₀|)` from
/// the point are intersected with the zero set of `p1`; a crossing within
/// `100δ` where `p2` also vanishes to `10⁻⁶` relative accuracy reveals a
/// common curve. Isolated common zeros are missed by lines that avoid them.
pub fn on_common_factor(
    p1: &BivarPoly,
    p2: &BivarPoly,
    point: (C64, C64),
    rng: &mut Rng,
    tol: &Tolerances,
) -> Result<bool> {
    let (l0, m0) = point;
    let delta = tol.neighbourhood * 1f64.max(l0.norm()).max(m0.norm());
    for _ in 0..3 {
        let [a, _, c, _] = random_line(rng);
        let norm = (a.norm_sqr() + c.norm_sqr()).sqrt();
        let (a, c) = (a / norm, c / norm);
        let (wl, wm) = (random_complex(rng), random_complex(rng));
        let wn = (wl.norm_sqr() + wm.norm_sqr()).sqrt();
        let (b, e) = (l0 + wl * (delta / wn), m0 + wm * (delta / wn));
        let f = trim(p1.restrict(a, b, c, e), tol.poly);
        let g = p2.restrict(a, b, c, e);
        for t in roots(&f)? {
            if t.norm() <= 100.0 * delta
                && horner(&g, t).norm() <= 1e-6 * horner_magnitude(&g, t).max(f64::MIN_POSITIVE)
            {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{diag, real_matrix};
    use crate::rng_from_seed;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn coef(p: &BivarPoly, j: usize, k: usize) -> C64 {
        p.coeffs[j][k]
    }

    #[test]
    fn char_poly_of_diag_lambda_mu() {
        let mut rng = rng_from_seed(1);
        let tol = Tolerances::default();
        let p = TwoParameterProblem::new(
            [diag(&[0.0, 0.0]), diag(&[1.0, 0.0]), diag(&[0.0, 1.0])],
            [diag(&[1.0]), diag(&[0.0]), diag(&[0.0])],
        )
        .unwrap();
        let q = char_poly(&p, 1, &mut rng, &tol).unwrap();
        assert!((coef(&q, 1, 1) - c(1.0)).norm() < 1e-12);
        assert_eq!(q.total_degree(), Some(2));
        let nonzero = q.coeffs.iter().flatten().filter(|z| z.norm() > 0.0).count();
        assert_eq!(nonzero, 1);
    }

    #[test]
    fn restriction_matches_evaluation() {
        let mut rng = rng_from_seed(2);
        let tol = Tolerances::default();
        let p = TwoParameterProblem::new(
            [
                real_matrix(2, 2, &[1.0, 2.0, 0.0, -1.0]),
                real_matrix(2, 2, &[0.5, 0.0, 1.0, 1.0]),
                real_matrix(2, 2, &[0.0, 1.0, -1.0, 2.0]),
            ],
            [diag(&[1.0]), diag(&[0.0]), diag(&[0.0])],
        )
        .unwrap();
        let q = char_poly(&p, 1, &mut rng, &tol).unwrap();
        let [a, b, cc, e] = random_line(&mut rng);
        let f = q.restrict(a, b, cc, e);
        let t = C64::new(0.3, -0.7);
        assert!((horner(&f, t) - q.eval(a * t + b, cc * t + e)).norm() < 1e-12);
    }

    #[test]
    fn coprime_lambda_mu() {
        let mut rng = rng_from_seed(3);
        let tol = Tolerances::default();
        let p = super::super::tests::lambda_mu();
        let p1 = char_poly(&p, 1, &mut rng, &tol).unwrap();
        let p2 = char_poly(&p, 2, &mut rng, &tol).unwrap();
        let r = coprime_test(&p1, &p2, &mut rng, &tol).unwrap();
        assert!(r.coprime);
        assert_eq!(r.common_degree, 0);
    }

    #[test]
    fn zero_polynomial_rejected() {
        let mut rng = rng_from_seed(4);
        let z = BivarPoly {
            degree: 1,
            coeffs: vec![vec![c(0.0); 2]; 2],
        };
        assert!(coprime_test(&z, &z, &mut rng, &Tolerances::default()).is_err());
    }

    #[test]
    fn diagonal_common_factor() {
        let mut rng = rng_from_seed(5);
        let tol = Tolerances::default();
        let p = super::super::tests::diagonal_common();
        let p1 = char_poly(&p, 1, &mut rng, &tol).unwrap();
        let p2 = char_poly(&p, 2, &mut rng, &tol).unwrap();
        // λ² − μ²
        assert!((coef(&p1, 2, 0) - c(1.0)).norm() < 1e-12);
        assert!((coef(&p1, 0, 2) + c(1.0)).norm() < 1e-12);
        assert!(coef(&p1, 1, 1).norm() < 1e-12);
        let r = coprime_test(&p1, &p2, &mut rng, &tol).unwrap();
        assert_eq!(r.common_degree, 1);
        for pt in [(c(0.0), c(0.0)), (c(1.0), c(1.0)), (c(-0.4), c(-0.4))] {
            assert!(on_common_factor(&p1, &p2, pt, &mut rng, &tol).unwrap());
        }
        // (1, −1) is a zero of p1 = (λ+μ)(λ−μ) only.
        assert!(!on_common_factor(&p1, &p2, (c(1.0), c(-1.0)), &mut rng, &tol).unwrap());
        // Off every curve.
        assert!(!on_common_factor(&p1, &p2, (c(2.0), c(0.0)), &mut rng, &tol).unwrap());
    }

    #[test]
    fn roots_of_quadratic() {
        let mut r = roots(&[c(2.0), c(-3.0), c(1.0)]).unwrap();
        r.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((r[0] - c(1.0)).norm() < 1e-12 && (r[1] - c(2.0)).norm() < 1e-12);
    }
}
