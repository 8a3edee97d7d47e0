//! Bundles of regular pencils and their covers under MLW and HC moves,
//! with the `T(α)` interaction count.
//!
//! Bundle grammar: finite partitions in braces separated by `|`, the
//! infinite partition prefixed by `inf:`, e.g. `{2,2}|{1}|inf:{1}`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Weakly decreasing list of positive block sizes.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Segre(Vec<usize>);

impl Segre {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::Precondition("Segre parts must be positive".into()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Precondition(format!(
                "Segre parts {parts:?} are not weakly decreasing"
            )));
        }
        Ok(Segre(parts))
    }

    /// Sorts and drops zero parts.
    pub fn normalized(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Segre(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// All `(p, q)` (1-based) accepted by [`mlw_move`].
    pub fn mlw_sites(&self) -> Vec<(usize, usize)> {
        let d = &self.0;
        let mut out = Vec::new();
        for p in 0..d.len() {
            for q in p + 1..d.len() {
                if d[p..q].iter().all(|&x| x == d[p]) {
                    out.push((p + 1, q + 1));
                }
            }
        }
        out
    }
}

impl fmt::Display for Segre {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Outcome of one MLW move.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MlwOutcome {
    pub segre: Segre,
    /// The shrunk block had size one and disappeared.
    pub block_removed: bool,
}

/// `d_p ← d_p + 1`, `d_q ← d_q − 1` for 1-based `p < q` with
/// `d_p = … = d_{q−1} ≥ d_q`.
pub fn mlw_move(s: &Segre, p: usize, q: usize) -> Result<MlwOutcome> {
    if !s.mlw_sites().contains(&(p, q)) {
        return Err(Error::Precondition(format!(
            "({p}, {q}) is not an MLW site of {s}"
        )));
    }
    let mut d = s.0.clone();
    d[p - 1] += 1;
    d[q - 1] -= 1;
    let block_removed = d[q - 1] == 0;
    Ok(MlwOutcome {
        segre: Segre::normalized(d),
        block_removed,
    })
}

/// Horizontal cut of size `c`: `b_j = min(d_j, c)`, `c_j = d_j − b_j`.
pub fn hc_move(s: &Segre, c: usize) -> Result<(Segre, Segre)> {
    let d1 = s.0.first().copied().unwrap_or(0);
    if c == 0 || c >= d1 {
        return Err(Error::Precondition(format!(
            "cut size {c} outside 1..{d1} for {s}"
        )));
    }
    let beta = s.0.iter().map(|&d| d.min(c)).collect();
    let gamma = s.0.iter().map(|&d| d - d.min(c)).collect();
    Ok((Segre::normalized(beta), Segre::normalized(gamma)))
}

/// `T(α) = Σ_i Σ_j min(d_i, e_j)`.
pub fn t_alpha(d: &Segre, e: &Segre) -> usize {
    d.0.iter()
        .map(|&x| e.0.iter().map(|&y| x.min(y)).sum::<usize>())
        .sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MlwLemmaReport {
    pub t: usize,
    pub t_moved: usize,
    /// Some `e_j` lies in `[d_q, d_p]`.
    pub strict_expected: bool,
    /// `T̃ ≤ T`, strictly when expected.
    pub holds: bool,
}

pub fn check_mlw_lemma(d: &Segre, e: &Segre, p: usize, q: usize) -> Result<MlwLemmaReport> {
    let moved = mlw_move(d, p, q)?;
    let t = t_alpha(d, e);
    let t_moved = t_alpha(&moved.segre, e);
    let (lo, hi) = (d.0[q - 1], d.0[p - 1]);
    let strict_expected = e.0.iter().any(|&x| lo <= x && x <= hi);
    let holds = t_moved <= t && (!strict_expected || t_moved < t);
    Ok(MlwLemmaReport {
        t,
        t_moved,
        strict_expected,
        holds,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HcLemmaReport {
    pub t: usize,
    /// Best total over the two ways of pairing the split eigenvalues.
    pub t_moved: usize,
    pub holds: bool,
}

pub fn check_hc_lemma(d: &Segre, e: &Segre, cut_d: usize, cut_e: usize) -> Result<HcLemmaReport> {
    let (bd, gd) = hc_move(d, cut_d)?;
    let (be, ge) = hc_move(e, cut_e)?;
    let t = t_alpha(d, e);
    let straight = t_alpha(&bd, &be) + t_alpha(&gd, &ge);
    let crossed = t_alpha(&bd, &ge) + t_alpha(&gd, &be);
    let t_moved = straight.max(crossed);
    Ok(HcLemmaReport {
        t,
        t_moved,
        holds: t_moved <= t,
    })
}

/// Regular bundle: one partition per distinct unspecified finite
/// eigenvalue plus the (possibly empty) infinite partition.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RegularBundle {
    pub eigen_partitions: Vec<Segre>,
    pub infinite_partition: Segre,
}

impl RegularBundle {
    pub fn new(mut eigen_partitions: Vec<Segre>, infinite_partition: Segre) -> Self {
        eigen_partitions.retain(|s| !s.is_empty());
        eigen_partitions.sort_unstable_by(|a, b| b.cmp(a));
        RegularBundle {
            eigen_partitions,
            infinite_partition,
        }
    }

    /// Pencil dimension.
    pub fn size(&self) -> usize {
        self.eigen_partitions
            .iter()
            .map(Segre::total)
            .sum::<usize>()
            + self.infinite_partition.total()
    }

    fn replaced(&self, i: usize, with: &[Segre]) -> RegularBundle {
        let mut parts = self.eigen_partitions.clone();
        parts.remove(i);
        parts.extend(with.iter().cloned());
        RegularBundle::new(parts, self.infinite_partition.clone())
    }

    fn with_infinite(&self, infinite: Segre, extra_finite: &[Segre]) -> RegularBundle {
        let mut parts = self.eigen_partitions.clone();
        parts.extend(extra_finite.iter().cloned());
        RegularBundle::new(parts, infinite)
    }
}

impl fmt::Display for RegularBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut tokens: Vec<String> = self
            .eigen_partitions
            .iter()
            .map(|s| s.to_string())
            .collect();
        if !self.infinite_partition.is_empty() {
            tokens.push(format!("inf:{}", self.infinite_partition));
        }
        write!(f, "{}", tokens.join("|"))
    }
}

fn parse_braced(tok: &str) -> Result<Segre> {
    let bad = || Error::Parse(format!("invalid partition `{tok}`"));
    let body = tok
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(bad)?;
    if body.trim().is_empty() {
        return Ok(Segre::default());
    }
    let parts = body
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|_| bad()))
        .collect::<Result<Vec<_>>>()?;
    if parts.contains(&0) {
        return Err(bad());
    }
    Ok(Segre::normalized(parts))
}

impl FromStr for RegularBundle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut finite = Vec::new();
        let mut infinite: Option<Segre> = None;
        if s.is_empty() {
            return Ok(RegularBundle::default());
        }
        for tok in s.split('|') {
            if let Some(rest) = tok.strip_prefix("inf:") {
                if infinite.is_some() {
                    return Err(Error::Parse("more than one infinite partition".into()));
                }
                infinite = Some(parse_braced(rest)?);
            } else {
                let part = parse_braced(tok)?;
                if part.is_empty() {
                    return Err(Error::Parse("empty finite partition".into()));
                }
                finite.push(part);
            }
        }
        Ok(RegularBundle::new(finite, infinite.unwrap_or_default()))
    }
}

/// Every bundle reached by one MLW or HC move.
///
/// Finite eigenvalues never become infinite. The infinite eigenvalue may
/// turn finite, either alone or together with the move applied to it.
pub fn enumerate_covers(b: &RegularBundle) -> Vec<RegularBundle> {
    let mut out = Vec::new();
    for (i, s) in b.eigen_partitions.iter().enumerate() {
        for (p, q) in s.mlw_sites() {
            let moved = mlw_move(s, p, q).expect("site from mlw_sites");
            out.push(b.replaced(i, &[moved.segre]));
        }
        for c in 1..s.parts().first().copied().unwrap_or(0) {
            let (beta, gamma) = hc_move(s, c).expect("cut in range");
            out.push(b.replaced(i, &[beta, gamma]));
        }
    }
    let inf = &b.infinite_partition;
    if !inf.is_empty() {
        let none = Segre::default();
        out.push(b.with_infinite(none.clone(), std::slice::from_ref(inf)));
        for (p, q) in inf.mlw_sites() {
            let moved = mlw_move(inf, p, q).expect("site from mlw_sites").segre;
            out.push(b.with_infinite(moved.clone(), &[]));
            out.push(b.with_infinite(none.clone(), &[moved]));
        }
        for c in 1..inf.parts()[0] {
            let (beta, gamma) = hc_move(inf, c).expect("cut in range");
            out.push(b.with_infinite(beta.clone(), std::slice::from_ref(&gamma)));
            out.push(b.with_infinite(gamma.clone(), std::slice::from_ref(&beta)));
            out.push(b.with_infinite(none.clone(), &[beta, gamma]));
        }
    }
    out.retain(|c| c != b);
    out.sort_by_key(|c| c.to_string());
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(p: &[usize]) -> Segre {
        Segre::new(p.to_vec()).unwrap()
    }

    #[test]
    fn mlw_examples() {
        let r = mlw_move(&seg(&[2, 2, 1]), 1, 3).unwrap();
        assert_eq!(r.segre, seg(&[3, 2]));
        assert!(r.block_removed);
        assert!(mlw_move(&seg(&[3, 2, 1]), 1, 3).is_err());
        let r = mlw_move(&seg(&[2, 2]), 1, 2).unwrap();
        assert_eq!(r.segre, seg(&[3, 1]));
        let r = mlw_move(&seg(&[3, 1, 1]), 2, 3).unwrap();
        assert_eq!(r.segre, seg(&[3, 2]));
        assert!(r.block_removed);
        let r = mlw_move(&seg(&[1, 1, 1]), 1, 3).unwrap();
        assert_eq!(r.segre, seg(&[2, 1]));
        assert!(mlw_move(&seg(&[3, 1]), 2, 1).is_err());
    }

    #[test]
    fn hc_examples() {
        assert_eq!(
            hc_move(&seg(&[3, 1]), 2).unwrap(),
            (seg(&[2, 1]), seg(&[1]))
        );
        assert_eq!(
            hc_move(&seg(&[3, 2]), 1).unwrap(),
            (seg(&[1, 1]), seg(&[2, 1]))
        );
        assert_eq!(hc_move(&seg(&[4]), 2).unwrap(), (seg(&[2]), seg(&[2])));
        assert!(hc_move(&seg(&[4]), 4).is_err());
        assert!(hc_move(&seg(&[4]), 0).is_err());
    }

    #[test]
    fn t_alpha_examples() {
        assert_eq!(t_alpha(&seg(&[2, 1]), &seg(&[2, 2])), 6);
        assert_eq!(t_alpha(&seg(&[1]), &seg(&[1])), 1);
        assert_eq!(t_alpha(&seg(&[3]), &seg(&[])), 0);
    }

    #[test]
    fn lemma_examples() {
        let r = check_mlw_lemma(&seg(&[2, 2]), &seg(&[2]), 1, 2).unwrap();
        assert_eq!(
            (r.t, r.t_moved, r.strict_expected, r.holds),
            (4, 3, true, true)
        );
        let r = check_mlw_lemma(&seg(&[2, 1]), &seg(&[3]), 1, 2).unwrap();
        assert_eq!(
            (r.t, r.t_moved, r.strict_expected, r.holds),
            (3, 3, false, true)
        );
        let r = check_mlw_lemma(&seg(&[1, 1]), &seg(&[1]), 1, 2).unwrap();
        assert_eq!((r.t, r.t_moved, r.strict_expected), (2, 1, true));
        let r = check_hc_lemma(&seg(&[3]), &seg(&[3]), 1, 1).unwrap();
        assert_eq!((r.t, r.t_moved), (3, 3));
        let r = check_hc_lemma(&seg(&[2]), &seg(&[4]), 1, 3).unwrap();
        assert_eq!((r.t, r.t_moved), (2, 2));
        let r = check_hc_lemma(&seg(&[2]), &seg(&[2]), 1, 1).unwrap();
        assert_eq!((r.t, r.t_moved), (2, 2));
    }

    #[test]
    fn bundle_grammar() {
        let b: RegularBundle = "{1}|{2,2}|inf:{1}".parse().unwrap();
        assert_eq!(b.to_string(), "{2,2}|{1}|inf:{1}");
        assert_eq!(b.size(), 6);
        for bad in ["{2,x}", "{}", "inf:{1}|inf:{2}", "2,2", "{0}"] {
            assert!(bad.parse::<RegularBundle>().is_err(), "{bad}");
        }
    }

    #[test]
    fn cover_examples() {
        let covers = |s: &str| -> Vec<String> {
            enumerate_covers(&s.parse().unwrap())
                .iter()
                .map(|b| b.to_string())
                .collect()
        };
        assert!(covers("{1}").is_empty());
        assert_eq!(covers("{2}"), vec!["{1}|{1}"]);
        assert_eq!(covers("{2,2}"), vec!["{1,1}|{1,1}", "{3,1}"]);
        assert_eq!(covers("inf:{1}"), vec!["{1}"]);
        assert!(covers("{2}|inf:{1}").iter().all(|c| c != "{2}|inf:{1}"));
    }
}
