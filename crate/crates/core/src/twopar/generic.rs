//! Numerical checks of the genericity conditions at a candidate point.

use num_complex::Complex64 as C64;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::TwoParameterProblem;
use crate::matcore::random_complex;
use crate::pencil::{normal_rank, MatrixPencil};
use crate::{Result, Rng, Tolerances};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenericityItem {
    /// 1-based item number.
    pub item: usize,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenericityReport {
    pub items: Vec<GenericityItem>,
}

impl GenericityReport {
    pub fn all_pass(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }

    pub fn item(&self, k: usize) -> Option<&GenericityItem> {
        self.items.iter().find(|i| i.item == k)
    }
}

fn unit_direction(rng: &mut Rng) -> C64 {
    C64::from_polar(1.0, rng.random::<f64>() * std::f64::consts::TAU)
}

/// Runs the six checks at `point`. `others` are the remaining computed
/// eigenvalues, used by item 5; the point itself may appear among them.
///
/// Neighbourhood probes use radius `neighbourhood · max(1, |λ₀|, |μ₀|)`.
pub fn check_genericity(
    p: &TwoParameterProblem,
    point: (C64, C64),
    others: &[(C64, C64)],
    rng: &mut Rng,
    tol: &Tolerances,
) -> Result<GenericityReport> {
    let (l0, m0) = point;
    let zero = C64::new(0.0, 0.0);
    let radius = tol.neighbourhood * 1f64.max(l0.norm()).max(m0.norm());
    let n = [p.n1(), p.n2()];
    let mut items = Vec::new();

    // 1 and 2: the one-parameter pencils through the point are regular.
    for (item, fixed_point, free) in [(1, (l0, zero), 'C'), (2, (zero, m0), 'B')] {
        let mut bad = Vec::new();
        for i in 1..=2 {
            let [_, b, c] = p.parts(i)?;
            let moving = if free == 'C' { c } else { b };
            let pen = MatrixPencil::new(p.w(i, fixed_point.0, fixed_point.1)?, moving.clone())?;
            if pen.rows() > 0 && normal_rank(&pen, rng, tol)? < pen.rows() {
                bad.push(i);
            }
        }
        items.push(GenericityItem {
            item,
            passed: bad.is_empty(),
            detail: if bad.is_empty() {
                "regular".into()
            } else {
                format!("singular for W{bad:?}")
            },
        });
    }

    // 3 and 4: full rank along each coordinate line near the point.
    for item in [3, 4] {
        let mut worst = None;
        for _ in 0..5 {
            let step = unit_direction(rng) * radius * (0.1 + 0.9 * rng.random::<f64>());
            let (l, m) = if item == 3 {
                (l0 + step, m0)
            } else {
                (l0, m0 + step)
            };
            for i in 1..=2 {
                let r = p.w_rank(i, l, m, tol)?;
                if r < n[i - 1] {
                    worst = Some((i, r));
                }
            }
        }
        items.push(GenericityItem {
            item,
            passed: worst.is_none(),
            detail: match worst {
                None => "full rank at all probes".into(),
                Some((i, r)) => format!("W{i} has rank {r} at a probe"),
            },
        });
    }

    // 5: no other eigenvalue shares a coordinate.
    let shared: Vec<String> = others
        .iter()
        .filter(|o| !(tol.same_eigenvalue(o.0, l0) && tol.same_eigenvalue(o.1, m0)))
        .filter(|o| tol.same_eigenvalue(o.0, l0) || tol.same_eigenvalue(o.1, m0))
        .map(|o| format!("({}, {})", o.0, o.1))
        .collect();
    items.push(GenericityItem {
        item: 5,
        passed: shared.is_empty(),
        detail: if shared.is_empty() {
            "coordinates distinct".into()
        } else {
            format!("shares a coordinate with {}", shared.join(", "))
        },
    });

    // 6: the rank sum drops strictly at the point.
    let at = p.w_rank(1, l0, m0, tol)? + p.w_rank(2, l0, m0, tol)?;
    let (dl, dm) = (random_complex(rng), random_complex(rng));
    let dn = (dl.norm_sqr() + dm.norm_sqr()).sqrt();
    let mut lowest = usize::MAX;
    for k in 0..8 {
        let turn = C64::from_polar(radius, std::f64::consts::TAU * k as f64 / 8.0);
        let (l, m) = (l0 + turn * dl / dn, m0 + turn * dm / dn);
        lowest = lowest.min(p.w_rank(1, l, m, tol)? + p.w_rank(2, l, m, tol)?);
    }
    items.push(GenericityItem {
        item: 6,
        passed: at < lowest,
        detail: format!("rank sum {at} at the point, at least {lowest} nearby"),
    });
    Ok(GenericityReport { items })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::diag;
    use crate::rng_from_seed;
    use crate::twopar::{derotate, rotate};

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn shared_coordinate_fixed_by_rotation() {
        // W1 = diag(λ − 1, λ − 1 + μ), W2 = diag(μ − 2, μ − 3): eigenvalues
        // (1, 2) and (1, 3) share λ.
        let p = TwoParameterProblem::new(
            [diag(&[-1.0, -1.0]), diag(&[1.0, 1.0]), diag(&[0.0, 1.0])],
            [diag(&[-2.0, -3.0]), diag(&[0.0, 0.0]), diag(&[1.0, 1.0])],
        )
        .unwrap();
        let tol = Tolerances::default();
        let mut rng = rng_from_seed(7);
        let pts = [(c(1.0), c(2.0)), (c(1.0), c(3.0))];
        let before = check_genericity(&p, pts[0], &pts, &mut rng, &tol).unwrap();
        assert!(!before.item(5).unwrap().passed);

        let phi = 0.9;
        let q = rotate(&p, phi);
        let back: Vec<(C64, C64)> = pts.iter().map(|&pt| derotate(-phi, pt)).collect();
        let after = check_genericity(&q, back[0], &back, &mut rng, &tol).unwrap();
        assert!(after.item(5).unwrap().passed);
    }

    #[test]
    fn lambda_mu_point_generic_after_rotation() {
        // Unrotated, W1(0, 0) − γC1 vanishes identically.
        let p = crate::twopar::tests::lambda_mu();
        let mut rng = rng_from_seed(8);
        let tol = Tolerances::default();
        let pt = (c(0.0), c(0.0));
        let r = check_genericity(&p, pt, &[pt], &mut rng, &tol).unwrap();
        assert!(!r.item(1).unwrap().passed && r.item(6).unwrap().passed);
        let r = check_genericity(&rotate(&p, 0.5), pt, &[pt], &mut rng, &tol).unwrap();
        assert!(r.all_pass(), "{r:?}");
    }
}
