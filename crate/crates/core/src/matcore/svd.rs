//! One-sided Jacobi singular value decomposition.

use num_complex::Complex64 as C64;

use super::{CMatrix, ZERO};

/// `m = u · diag(σ) · vᴴ` with `σ` nonincreasing. `v` is square
/// (`cols × cols`); `u` has one column per singular value, zero where
/// `σ = 0`.
#[derive(Clone, Debug)]
pub struct Svd {
    pub singular_values: Vec<f64>,
    pub u: CMatrix,
    pub v: CMatrix,
}

const MAX_SWEEPS: usize = 80;

fn dotc(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).fold(ZERO, |acc, (a, b)| acc + a.conj() * b)
}

fn norm2(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum()
}

/// Applies `[x, y] ← [c·x − s·ē·y, s·x + c·ē·y]` to columns `i < j` of a
/// column-major buffer with `rows` rows.
fn rotate(buf: &mut [C64], rows: usize, i: usize, j: usize, c: f64, s: f64, e: C64) {
    let (head, tail) = buf.split_at_mut(j * rows);
    let x = &mut head[i * rows..(i + 1) * rows];
    let y = &mut tail[..rows];
    let ec = e.conj();
    for (xk, yk) in x.iter_mut().zip(y.iter_mut()) {
        let (a, b) = (*xk, *yk * ec);
        *xk = a * c - b * s;
        *yk = a * s + b * c;
    }
}

pub fn svd(m: &CMatrix) -> Svd {
    let (rows, cols) = m.shape();
    let mut w = m.clone();
    let mut v = CMatrix::identity(cols, cols);
    if rows > 0 {
        for _ in 0..MAX_SWEEPS {
            let mut rotated = false;
            for i in 0..cols {
                for j in i + 1..cols {
                    let ws = w.as_slice();
                    let (wi, wj) = (&ws[i * rows..(i + 1) * rows], &ws[j * rows..(j + 1) * rows]);
                    let a = norm2(wi);
                    let b = norm2(wj);
                    let g = dotc(wi, wj);
                    let gn = g.norm();
                    if gn == 0.0 || gn <= f64::EPSILON * (a * b).sqrt() {
                        continue;
                    }
                    rotated = true;
                    let zeta = (b - a) / (2.0 * gn);
                    let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = c * t;
                    // Rescale first: `g` may be subnormal for nearly zero columns.
                    let big = g.re.abs().max(g.im.abs());
                    let e = (g / big) / (g / big).norm();
                    rotate(w.as_mut_slice(), rows, i, j, c, s, e);
                    rotate(v.as_mut_slice(), cols, i, j, c, s, e);
                }
            }
            if !rotated {
                break;
            }
        }
    }
    let norms: Vec<f64> = (0..cols).map(|j| w.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));
    let mut u = CMatrix::zeros(rows, cols);
    let mut vs = CMatrix::zeros(cols, cols);
    for (k, &j) in order.iter().enumerate() {
        if norms[j] > 0.0 {
            u.set_column(k, &(w.column(j) / C64::from(norms[j])));
        }
        vs.set_column(k, &v.column(j));
    }
    Svd {
        singular_values: order.iter().map(|&j| norms[j]).collect(),
        u,
        v: vs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::random_matrix;
    use crate::rng_from_seed;

    fn check(m: &CMatrix) {
        let d = svd(m);
        let (r, c) = m.shape();
        let sigma = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            c,
            d.singular_values.iter().map(|&x| C64::from(x)),
        ));
        let recon = &d.u * sigma * d.v.adjoint();
        assert!((recon - m).norm() <= 1e-13 * m.norm().max(1.0), "{r}×{c}");
        let vv = (d.v.adjoint() * &d.v - CMatrix::identity(c, c)).norm();
        assert!(vv < 1e-13, "{r}x{c} {vv:e}");
        assert!(d.singular_values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn reconstructs_random_and_deficient() {
        let mut rng = rng_from_seed(31);
        for (r, c) in [(1, 1), (5, 3), (3, 5), (8, 8), (12, 10)] {
            check(&random_matrix(&mut rng, r, c));
            let low = random_matrix(&mut rng, r, 2) * random_matrix(&mut rng, 2, c);
            check(&low);
        }
        check(&CMatrix::zeros(3, 2));
    }

    #[test]
    fn rank_one_tall_matrix() {
        let mut rng = rng_from_seed(32);
        let m = random_matrix(&mut rng, 10, 1) * random_matrix(&mut rng, 1, 3);
        let d = svd(&m);
        assert!(d.singular_values[1] < 1e-14 * d.singular_values[0]);
        // The leading left vector lies in the column space.
        let col = m.column(0).normalize();
        assert!((d.u.column(0).dotc(&col).norm() - 1.0).abs() < 1e-13);
    }
}
