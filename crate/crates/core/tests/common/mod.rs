//! Random generators shared by the integration tests.
#![allow(dead_code)]

use rand::Rng as _;
use sing2ep::matcore::{random_complex, random_well_conditioned};
use sing2ep::{CMatrix, KroneckerBlock, KroneckerStructure, Rng, TwoParameterProblem, C64};

pub const EIGS: [C64; 7] = [
    C64::new(0.0, 0.0),
    C64::new(1.0, 0.0),
    C64::new(-1.0, 0.0),
    C64::new(2.0, 0.0),
    C64::new(0.5, 0.0),
    C64::new(1.0, 1.0),
    C64::new(0.0, -2.0),
];

/// Random structure with both dimensions at most `max_dim`.
pub fn random_structure(rng: &mut Rng, max_dim: usize) -> KroneckerStructure {
    loop {
        let nb = rng.random_range(1..=5);
        let blocks = (0..nb)
            .map(|_| match rng.random_range(0..4) {
                0 => KroneckerBlock::Finite {
                    alpha: EIGS[rng.random_range(0..EIGS.len())],
                    size: rng.random_range(1..=3),
                },
                1 => KroneckerBlock::Infinite {
                    size: rng.random_range(1..=3),
                },
                2 => KroneckerBlock::Right {
                    degree: rng.random_range(0..=2),
                },
                _ => KroneckerBlock::Left {
                    degree: rng.random_range(0..=2),
                },
            })
            .collect();
        let s = KroneckerStructure::from_blocks(blocks);
        if s.rows <= max_dim && s.cols <= max_dim && s.rows + s.cols > 0 {
            return s;
        }
    }
}

fn regular_from(rng: &mut Rng, pool: &[C64], n: usize, first: Option<C64>) -> KroneckerStructure {
    let mut blocks = Vec::new();
    let mut left = n;
    if let Some(alpha) = first {
        let size = rng.random_range(1..=left.min(3));
        blocks.push(KroneckerBlock::Finite { alpha, size });
        left -= size;
    }
    while left > 0 {
        let size = rng.random_range(1..=left.min(3));
        left -= size;
        blocks.push(if rng.random_range(0..5) == 0 {
            KroneckerBlock::Infinite { size }
        } else {
            KroneckerBlock::Finite {
                alpha: pool[rng.random_range(0..pool.len())],
                size,
            }
        });
    }
    KroneckerStructure::from_blocks(blocks)
}

/// Two regular structures of order at most 6 that share at least one
/// finite eigenvalue.
pub fn regular_pair(rng: &mut Rng) -> (KroneckerStructure, KroneckerStructure) {
    let a = rng.random_range(0..EIGS.len());
    let b = (a + rng.random_range(1..EIGS.len())) % EIGS.len();
    let pool = [EIGS[a], EIGS[b]];
    let shared = pool[rng.random_range(0..2)];
    let n1 = rng.random_range(1..=6);
    let s1 = regular_from(rng, &pool, n1, Some(shared));
    let n2 = rng.random_range(1..=6);
    let s2 = regular_from(rng, &pool, n2, Some(shared));
    (s1, s2)
}

/// Integer partitions of every total in `1..=max`, largest parts first.
pub fn partitions_up_to(max: usize) -> Vec<Vec<usize>> {
    fn go(left: usize, cap: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=left.min(cap)).rev() {
            cur.push(part);
            go(left - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for total in 1..=max {
        go(total, total, &mut Vec::new(), &mut out);
    }
    out
}

/// A coprime singular problem with known eigenvalues.
pub struct Planted {
    pub problem: TwoParameterProblem,
    pub roots: Vec<(C64, C64)>,
}

/// A line `a + bλ + cμ`.
type Line = [C64; 3];

fn scramble(rng: &mut Rng, lines: &[Line]) -> [CMatrix; 3] {
    let n = lines.len();
    let (p, q) = (
        random_well_conditioned(rng, n, 10.0),
        random_well_conditioned(rng, n, 10.0),
    );
    std::array::from_fn(|k| {
        let d = CMatrix::from_diagonal(&sing2ep::CVector::from_iterator(
            n,
            lines.iter().map(|l| l[k]),
        ));
        &p * d * &q
    })
}

/// `W_i = P_i diag(ℓ_ik) Q_i` with every `ℓ_ik` either a line or a nonzero
/// constant. Distinct parallel lines across the two problems, or a constant
/// in both, make `Δ₀` singular while the determinants stay coprime. The
/// eigenvalues are the intersections of non-parallel line pairs, solved in
/// closed form.
pub fn planted_diagonal(rng: &mut Rng) -> Planted {
    'retry: loop {
        let n1 = rng.random_range(1..=4);
        let n2 = rng.random_range(1..=4);
        let line = |rng: &mut Rng| {
            [
                random_complex(rng),
                random_complex(rng),
                random_complex(rng),
            ]
        };
        let mut l1: Vec<Line> = (0..n1).map(|_| line(rng)).collect();
        let mut l2: Vec<Line> = (0..n2).map(|_| line(rng)).collect();
        let constants = n1 > 1 && n2 > 1 && rng.random_bool(0.5);
        if constants {
            l1[0] = [
                random_complex(rng) + 0.5,
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
            ];
            l2[0] = [
                random_complex(rng) + 0.5,
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
            ];
        }
        if !constants || rng.random_bool(0.5) {
            let (i, j) = (n1 - 1, n2 - 1);
            let s = random_complex(rng);
            l2[j] = [random_complex(rng), s * l1[i][1], s * l1[i][2]];
        }
        let mut roots = Vec::new();
        for a in &l1 {
            for b in &l2 {
                let det = a[1] * b[2] - a[2] * b[1];
                let scale = (a[1].norm() + a[2].norm()) * (b[1].norm() + b[2].norm());
                if det.norm() <= 1e-12 * scale.max(1e-300) {
                    continue;
                }
                if det.norm() < 0.05 * scale {
                    continue 'retry;
                }
                // b1 λ + c1 μ = −a1, b2 λ + c2 μ = −a2.
                let lam = (-a[0] * b[2] + b[0] * a[2]) / det;
                let mu = (-b[0] * a[1] + a[0] * b[1]) / det;
                roots.push((lam, mu));
            }
        }
        let far = |x: &(C64, C64)| x.0.norm() > 10.0 || x.1.norm() > 10.0;
        if roots.is_empty() || roots.iter().any(far) {
            continue;
        }
        for (i, x) in roots.iter().enumerate() {
            for y in &roots[i + 1..] {
                if (x.0 - y.0).norm() + (x.1 - y.1).norm() < 1e-2 {
                    continue 'retry;
                }
            }
        }
        let problem = TwoParameterProblem::new(scramble(rng, &l1), scramble(rng, &l2))
            .expect("consistent shapes");
        return Planted { problem, roots };
    }
}

/// Greedy matching of two point sets within `tol` in both coordinates.
pub fn same_points(a: &[(C64, C64)], b: &[(C64, C64)], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    a.iter().all(|x| {
        let hit = (0..b.len())
            .find(|&k| !used[k] && (x.0 - b[k].0).norm() <= tol && (x.1 - b[k].1).norm() <= tol);
        hit.map(|k| used[k] = true).is_some()
    })
}

pub fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}
