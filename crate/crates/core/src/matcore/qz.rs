//! Complex single-shift QZ iteration for square pencils.

use num_complex::Complex64 as C64;

use super::{random_complex, singular_values, CMatrix, ZERO};
use crate::{Error, Result, Rng};

const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;

/// Plane rotation `[c s; -conj(s) c]` with real `c`.
#[derive(Clone, Copy, Debug)]
struct Givens {
    c: f64,
    s: C64,
}

impl Givens {
    /// Rotation mapping `(a, b)` to `(r, 0)`.
    fn zeroing(a: C64, b: C64) -> Self {
        let nb = b.norm();
        if nb == 0.0 {
            return Givens { c: 1.0, s: ZERO };
        }
        let na = a.norm();
        if na == 0.0 {
            return Givens {
                c: 0.0,
                s: b.conj() / nb,
            };
        }
        let r = na.hypot(nb);
        Givens {
            c: na / r,
            s: (a / na) * b.conj() / r,
        }
    }

    fn rows(&self, m: &mut CMatrix, i: usize, j: usize, cols: std::ops::Range<usize>) {
        for k in cols {
            let x = m[(i, k)];
            let y = m[(j, k)];
            m[(i, k)] = x * self.c + self.s * y;
            m[(j, k)] = -self.s.conj() * x + y * self.c;
        }
    }

    /// Applies the rotation on the right to columns `i` and `j`; built with
    /// `zeroing(m[(r, j)], m[(r, i)])` it annihilates `m[(r, i)]`.
    fn cols(&self, m: &mut CMatrix, i: usize, j: usize, rows: std::ops::Range<usize>) {
        for k in rows {
            let x = m[(k, i)];
            let y = m[(k, j)];
            m[(k, i)] = x * self.c - y * self.s.conj();
            m[(k, j)] = x * self.s + y * self.c;
        }
    }
}

/// Generalized eigenvalues of the square pencil `a - λ b` as `(α, β)`
/// pairs with `λ = α / β`. The iteration assumes `b` is numerically
/// nonsingular; infinite eigenvalues show up as tiny `β` but are not
/// deflated specially.
pub fn qz_eigenvalues(a: &CMatrix, b: &CMatrix) -> Result<Vec<(C64, C64)>> {
    let n = a.nrows();
    if a.ncols() != n || b.shape() != (n, n) {
        return Err(Error::NonSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let qr = b.clone().qr();
    let mut t = qr.r();
    let mut h = qr.q().adjoint() * a;

    // Hessenberg-triangular reduction.
    for j in 0..n.saturating_sub(2) {
        for i in (j + 2..n).rev() {
            let g = Givens::zeroing(h[(i - 1, j)], h[(i, j)]);
            g.rows(&mut h, i - 1, i, j..n);
            g.rows(&mut t, i - 1, i, i - 1..n);
            h[(i, j)] = ZERO;
            let z = Givens::zeroing(t[(i, i)], t[(i, i - 1)]);
            z.cols(&mut t, i - 1, i, 0..i + 1);
            z.cols(&mut h, i - 1, i, 0..n);
            t[(i, i - 1)] = ZERO;
        }
    }

    let scale_h = h.norm().max(f64::MIN_POSITIVE);
    let mut hi = n - 1;
    let mut iters = 0usize;
    while hi > 0 {
        // Find the top of the active unreduced block.
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let diag = h[(lo, lo)].norm() + h[(lo - 1, lo - 1)].norm();
            let base = if diag > 0.0 { diag } else { scale_h };
            if sub <= f64::EPSILON * base {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            iters = 0;
            continue;
        }
        iters += 1;
        if iters > MAX_SWEEPS_PER_EIGENVALUE {
            return Err(Error::Numerical("QZ iteration did not converge".into()));
        }
        let shift = if iters.is_multiple_of(11) {
            // Exceptional shift to break cycles.
            h[(hi, hi - 1)].norm() * C64::new(0.75, 0.31) + ratio(h[(hi, hi)], t[(hi, hi)])
        } else {
            wilkinson_shift(&h, &t, hi)
        };
        sweep(&mut h, &mut t, lo, hi, shift);
    }

    Ok((0..n).map(|k| (h[(k, k)], t[(k, k)])).collect())
}

fn ratio(a: C64, b: C64) -> C64 {
    if b.norm() == 0.0 {
        a * 1e300
    } else {
        a / b
    }
}

/// Eigenvalue of the trailing 2×2 pencil closest to the last diagonal ratio.
fn wilkinson_shift(h: &CMatrix, t: &CMatrix, hi: usize) -> C64 {
    let k = hi - 1;
    let (h11, h12, h21, h22) = (h[(k, k)], h[(k, hi)], h[(hi, k)], h[(hi, hi)]);
    let (t11, t12, t22) = (t[(k, k)], t[(k, hi)], t[(hi, hi)]);
    let qa = t11 * t22;
    let qb = -(h11 * t22 + h22 * t11 - h21 * t12);
    let qc = h11 * h22 - h12 * h21;
    let target = ratio(h22, t22);
    if qa.norm() <= f64::EPSILON * (qb.norm() + qc.norm()) {
        return target;
    }
    let disc = (qb * qb - qa * qc * 4.0).sqrt();
    let r1 = (-qb + disc) / (qa * 2.0);
    let r2 = (-qb - disc) / (qa * 2.0);
    if (r1 - target).norm() <= (r2 - target).norm() {
        r1
    } else {
        r2
    }
}

/// One implicit single-shift QZ sweep over rows/columns `lo..=hi`.
fn sweep(h: &mut CMatrix, t: &mut CMatrix, lo: usize, hi: usize, shift: C64) {
    let end = hi + 1;
    let x = h[(lo, lo)] - shift * t[(lo, lo)];
    let y = h[(lo + 1, lo)];
    let mut g = Givens::zeroing(x, y);
    for k in lo..hi {
        if k > lo {
            g = Givens::zeroing(h[(k, k - 1)], h[(k + 1, k - 1)]);
            g.rows(h, k, k + 1, k - 1..end);
            h[(k + 1, k - 1)] = ZERO;
        } else {
            g.rows(h, k, k + 1, k..end);
        }
        g.rows(t, k, k + 1, k..end);
        let z = Givens::zeroing(t[(k + 1, k + 1)], t[(k + 1, k)]);
        z.cols(t, k, k + 1, lo..k + 2);
        t[(k + 1, k)] = ZERO;
        z.cols(h, k, k + 1, lo..(k + 3).min(end));
    }
}

/// Spectrum of `a - λ b` in Möbius coordinates `ν = 1 / (λ - shift)`.
///
/// Infinite eigenvalues map to `ν = 0`, so perturbed copies of a defective
/// infinite eigenvalue stay clustered near the origin instead of scattering
/// to large finite values.
#[derive(Clone, Debug)]
pub struct ShiftedSpectrum {
    pub shift: C64,
    pub nu: Vec<C64>,
}

impl ShiftedSpectrum {
    pub fn to_lambda(&self, nu: C64) -> Option<C64> {
        if nu.norm() <= 1e3 * f64::EPSILON {
            None
        } else {
            Some(self.shift + nu.inv())
        }
    }
}

/// Runs QZ on `(b, a − σ b)` for a random shift `σ` at which `a − σ b` is
/// well conditioned.
pub fn shifted_spectrum(a: &CMatrix, b: &CMatrix, rng: &mut Rng) -> Result<ShiftedSpectrum> {
    let n = a.nrows();
    if n == 0 {
        return Ok(ShiftedSpectrum {
            shift: ZERO,
            nu: Vec::new(),
        });
    }
    let scale = (a.norm() / b.norm().max(f64::MIN_POSITIVE)).clamp(1e-3, 1e3);
    for _ in 0..8 {
        let shift = random_complex(rng) * scale;
        let shifted = a - b * shift;
        let s = singular_values(&shifted);
        if s[0] == 0.0 || s[n - 1] / s[0] < 1e-10 {
            continue;
        }
        let norm = shifted.norm();
        let pairs = qz_eigenvalues(&(b / C64::from(norm)), &(shifted / C64::from(norm)))?;
        let nu = pairs.into_iter().map(|(al, be)| ratio(al, be)).collect();
        return Ok(ShiftedSpectrum { shift, nu });
    }
    Err(Error::Numerical(
        "no well-conditioned shift found; pencil appears singular".into(),
    ))
}
