//! Kronecker blocks, structures and their text grammar.
//!
//! Grammar: blocks joined by `+`, each optionally prefixed by a
//! multiplicity `k*`; tokens `J{d}({complex})`, `N{d}`, `L{d}`, `L{d}T`.
//! Complex numbers render as `{re}` or `{re}{±im}i`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::matcore::{block_diag, CMatrix, ONE};
use crate::{Error, Result, Tolerances};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum KroneckerBlock {
    /// `J_d(α)`.
    Finite { alpha: C64, size: usize },
    /// `N_d`.
    Infinite { size: usize },
    /// `L_d`, of shape `d × (d+1)`.
    Right { degree: usize },
    /// `L_dᵀ`, of shape `(d+1) × d`.
    Left { degree: usize },
}

impl KroneckerBlock {
    pub fn rows(&self) -> usize {
        match *self {
            KroneckerBlock::Finite { size, .. } | KroneckerBlock::Infinite { size } => size,
            KroneckerBlock::Right { degree } => degree,
            KroneckerBlock::Left { degree } => degree + 1,
        }
    }

    pub fn cols(&self) -> usize {
        match *self {
            KroneckerBlock::Finite { size, .. } | KroneckerBlock::Infinite { size } => size,
            KroneckerBlock::Right { degree } => degree + 1,
            KroneckerBlock::Left { degree } => degree,
        }
    }

    pub fn is_regular(&self) -> bool {
        matches!(
            self,
            KroneckerBlock::Finite { .. } | KroneckerBlock::Infinite { .. }
        )
    }

    /// Number of chain vectors attached to the block.
    pub fn chain_len(&self) -> usize {
        self.cols()
    }

    fn validate(&self) -> Result<()> {
        match *self {
            KroneckerBlock::Finite { alpha, size } => {
                if size == 0 || !alpha.re.is_finite() || !alpha.im.is_finite() {
                    return Err(Error::Parse(format!("invalid block {self}")));
                }
            }
            KroneckerBlock::Infinite { size } if size == 0 => {
                return Err(Error::Parse("N0 is not a block".into()));
            }
            _ => {}
        }
        Ok(())
    }

    /// Canonical `(A, B)` with `A − λB` equal to the block.
    pub fn canonical(&self) -> (CMatrix, CMatrix) {
        let (r, c) = (self.rows(), self.cols());
        let mut a = CMatrix::zeros(r, c);
        let mut b = CMatrix::zeros(r, c);
        match *self {
            KroneckerBlock::Finite { alpha, size } => {
                for i in 0..size {
                    a[(i, i)] = alpha;
                    b[(i, i)] = ONE;
                    if i + 1 < size {
                        a[(i, i + 1)] = ONE;
                    }
                }
            }
            KroneckerBlock::Infinite { size } => {
                for i in 0..size {
                    a[(i, i)] = ONE;
                    if i + 1 < size {
                        b[(i, i + 1)] = ONE;
                    }
                }
            }
            KroneckerBlock::Right { degree } => {
                for i in 0..degree {
                    b[(i, i)] = ONE;
                    a[(i, i + 1)] = ONE;
                }
            }
            KroneckerBlock::Left { degree } => {
                for j in 0..degree {
                    b[(j, j)] = ONE;
                    a[(j + 1, j)] = ONE;
                }
            }
        }
        (a, b)
    }

    fn kind_rank(&self) -> u8 {
        match self {
            KroneckerBlock::Right { .. } => 0,
            KroneckerBlock::Left { .. } => 1,
            KroneckerBlock::Finite { .. } => 2,
            KroneckerBlock::Infinite { .. } => 3,
        }
    }

    /// Display order: `L`, `Lᵀ` by degree, then `J` by eigenvalue
    /// (descending real, then imaginary part) and size, then `N`.
    fn display_cmp(&self, other: &Self) -> Ordering {
        use KroneckerBlock::*;
        self.kind_rank()
            .cmp(&other.kind_rank())
            .then_with(|| match (self, other) {
                (Right { degree: a }, Right { degree: b })
                | (Left { degree: a }, Left { degree: b }) => a.cmp(b),
                (Finite { alpha: a, size: sa }, Finite { alpha: b, size: sb }) => {
                    let (a, b) = (round_display(*a), round_display(*b));
                    b.re.total_cmp(&a.re)
                        .then(b.im.total_cmp(&a.im))
                        .then(sb.cmp(sa))
                }
                (Infinite { size: a }, Infinite { size: b }) => b.cmp(a),
                _ => Ordering::Equal,
            })
    }

    fn same_as(&self, other: &Self, tol: &Tolerances) -> bool {
        use KroneckerBlock::*;
        match (self, other) {
            (Finite { alpha: a, size: sa }, Finite { alpha: b, size: sb }) => {
                sa == sb && tol.same_eigenvalue(*a, *b)
            }
            _ => self == other,
        }
    }
}

impl fmt::Display for KroneckerBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KroneckerBlock::Finite { alpha, size } => {
                write!(f, "J{size}({})", format_complex(*alpha))
            }
            KroneckerBlock::Infinite { size } => write!(f, "N{size}"),
            KroneckerBlock::Right { degree } => write!(f, "L{degree}"),
            KroneckerBlock::Left { degree } => write!(f, "L{degree}T"),
        }
    }
}

/// Rounds to nine decimals and drops signed zeros so that computed
/// eigenvalues render like the exact ones they approximate.
fn round_display(z: C64) -> C64 {
    fn r(x: f64) -> f64 {
        let y = (x * 1e9).round() / 1e9;
        if y == 0.0 {
            0.0
        } else {
            y
        }
    }
    C64::new(r(z.re), r(z.im))
}

/// `re` or `re±imi`, shortest round-trip decimals after display rounding.
pub fn format_complex(z: C64) -> String {
    let z = round_display(z);
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im > 0.0 {
        format!("{}+{}i", z.re, z.im)
    } else {
        format!("{}-{}i", z.re, -z.im)
    }
}

pub fn parse_complex(s: &str) -> Result<C64> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid complex number `{s}`"));
    let parse = |t: &str| t.parse::<f64>().map_err(|_| bad());
    let z = if let Some(body) = s.strip_suffix('i') {
        // Split at the last sign that is not part of an exponent.
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&k| {
                (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E')
            })
            .ok_or_else(bad)?;
        let (re, im) = body.split_at(split);
        let im = match im {
            "+" => 1.0,
            "-" => -1.0,
            _ => parse(im)?,
        };
        C64::new(parse(re)?, im)
    } else {
        C64::new(parse(s)?, 0.0)
    };
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(bad());
    }
    Ok(z)
}

impl FromStr for KroneckerBlock {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("invalid Kronecker block `{s}`"));
        let digits = |t: &str| t.parse::<usize>().map_err(|_| bad());
        let block = if let Some(rest) = s.strip_prefix('J') {
            let open = rest.find('(').ok_or_else(bad)?;
            let body = rest[open + 1..].strip_suffix(')').ok_or_else(bad)?;
            KroneckerBlock::Finite {
                size: digits(&rest[..open])?,
                alpha: parse_complex(body)?,
            }
        } else if let Some(rest) = s.strip_prefix('N') {
            KroneckerBlock::Infinite {
                size: digits(rest)?,
            }
        } else if let Some(rest) = s.strip_prefix('L') {
            match rest.strip_suffix('T') {
                Some(d) => KroneckerBlock::Left { degree: digits(d)? },
                None => KroneckerBlock::Right {
                    degree: digits(rest)?,
                },
            }
        } else {
            return Err(bad());
        };
        block.validate()?;
        Ok(block)
    }
}

/// Multiset of Kronecker blocks describing an `m × n` pencil.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KroneckerStructure {
    pub rows: usize,
    pub cols: usize,
    pub blocks: Vec<KroneckerBlock>,
}

impl KroneckerStructure {
    /// Builds a structure whose shape is the tiling of its blocks.
    pub fn from_blocks(mut blocks: Vec<KroneckerBlock>) -> Self {
        blocks.sort_by(|a, b| a.display_cmp(b));
        KroneckerStructure {
            rows: blocks.iter().map(|b| b.rows()).sum(),
            cols: blocks.iter().map(|b| b.cols()).sum(),
            blocks,
        }
    }

    /// Whether the blocks tile the declared shape.
    pub fn tiles(&self) -> bool {
        self.blocks.iter().map(|b| b.rows()).sum::<usize>() == self.rows
            && self.blocks.iter().map(|b| b.cols()).sum::<usize>() == self.cols
    }

    pub fn is_regular(&self) -> bool {
        self.blocks.iter().all(|b| b.is_regular())
    }

    pub fn right_indices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .blocks
            .iter()
            .filter_map(|b| match b {
                KroneckerBlock::Right { degree } => Some(*degree),
                _ => None,
            })
            .collect();
        v.sort_unstable();
        v
    }

    pub fn left_indices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .blocks
            .iter()
            .filter_map(|b| match b {
                KroneckerBlock::Left { degree } => Some(*degree),
                _ => None,
            })
            .collect();
        v.sort_unstable();
        v
    }

    /// Infinite Segre characteristic (nonincreasing).
    pub fn infinite_segre(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .blocks
            .iter()
            .filter_map(|b| match b {
                KroneckerBlock::Infinite { size } => Some(*size),
                _ => None,
            })
            .collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }

    /// Distinct finite eigenvalues with their Segre characteristics.
    pub fn finite_segre(&self, tol: &Tolerances) -> Vec<(C64, Vec<usize>)> {
        let mut out: Vec<(C64, Vec<usize>)> = Vec::new();
        for b in &self.blocks {
            if let KroneckerBlock::Finite { alpha, size } = *b {
                match out.iter_mut().find(|(a, _)| tol.same_eigenvalue(*a, alpha)) {
                    Some((_, parts)) => parts.push(size),
                    None => out.push((alpha, vec![size])),
                }
            }
        }
        for (_, parts) in &mut out {
            parts.sort_unstable_by(|a, b| b.cmp(a));
        }
        out
    }

    /// Multiset equality, eigenvalues compared under `tol`.
    pub fn same_as(&self, other: &Self, tol: &Tolerances) -> bool {
        if self.rows != other.rows || self.cols != other.cols {
            return false;
        }
        if self.blocks.len() != other.blocks.len() {
            return false;
        }
        let mut used = vec![false; other.blocks.len()];
        self.blocks.iter().all(|b| {
            match (0..other.blocks.len()).find(|&j| !used[j] && b.same_as(&other.blocks[j], tol)) {
                Some(j) => {
                    used[j] = true;
                    true
                }
                None => false,
            }
        })
    }

    /// Block-diagonal canonical pencil `(A, B)`.
    pub fn canonical(&self) -> (CMatrix, CMatrix) {
        let (a, b): (Vec<CMatrix>, Vec<CMatrix>) =
            self.blocks.iter().map(|blk| blk.canonical()).unzip();
        (block_diag(&a), block_diag(&b))
    }

    /// The bundle: the same blocks with eigenvalue values forgotten.
    pub fn bundle(&self, tol: &Tolerances) -> BundleDescriptor {
        let mut finite: Vec<Vec<usize>> =
            self.finite_segre(tol).into_iter().map(|(_, p)| p).collect();
        finite.sort();
        BundleDescriptor {
            right: self.right_indices(),
            left: self.left_indices(),
            infinite: self.infinite_segre(),
            finite,
        }
    }
}

impl fmt::Display for KroneckerStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut blocks = self.blocks.clone();
        blocks.sort_by(|a, b| a.display_cmp(b));
        let tokens: Vec<String> = blocks.iter().map(|b| b.to_string()).collect();
        let mut parts = Vec::new();
        let mut i = 0;
        while i < tokens.len() {
            let mut j = i;
            while j < tokens.len() && tokens[j] == tokens[i] {
                j += 1;
            }
            if j - i > 1 {
                parts.push(format!("{}*{}", j - i, tokens[i]));
            } else {
                parts.push(tokens[i].clone());
            }
            i = j;
        }
        if parts.is_empty() {
            return write!(f, "");
        }
        write!(f, "{}", parts.join("+"))
    }
}

impl FromStr for KroneckerStructure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut blocks = Vec::new();
        if s.is_empty() {
            return Ok(Self::from_blocks(blocks));
        }
        let mut depth = 0i32;
        let mut start = 0;
        let mut tokens = Vec::new();
        for (k, ch) in s.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                '+' if depth == 0 => {
                    tokens.push(&s[start..k]);
                    start = k + 1;
                }
                _ => {}
            }
        }
        tokens.push(&s[start..]);
        for tok in tokens {
            let (mult, body) = match tok.split_once('*') {
                Some((m, b)) => (
                    m.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("invalid multiplicity in `{tok}`")))?,
                    b,
                ),
                None => (1, tok),
            };
            let block: KroneckerBlock = body.parse()?;
            blocks.extend(std::iter::repeat_n(block, mult));
        }
        Ok(Self::from_blocks(blocks))
    }
}

/// Canonical structure with eigenvalues unspecified.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleDescriptor {
    pub right: Vec<usize>,
    pub left: Vec<usize>,
    pub infinite: Vec<usize>,
    /// One Segre characteristic per distinct finite eigenvalue, sorted.
    pub finite: Vec<Vec<usize>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_renders_structure_strings() {
        for s in [
            "L0+L0T+J1(1)+J1(0)+N1",
            "2*L0+2*L0T+2*J1(0)",
            "L0+L1+L0T+L1T",
            "L0+L1T+J1(1)+N1",
            "2*J1(1)",
        ] {
            let k: KroneckerStructure = s.parse().unwrap();
            assert!(k.tiles());
            assert_eq!(k.to_string(), s);
        }
        let k: KroneckerStructure = "6*L0T+2*L1+4*L0+2*J1(0)+6*N1".parse().unwrap();
        assert_eq!((k.rows, k.cols), (16, 16));
        assert_eq!(k.to_string(), "4*L0+2*L1+6*L0T+2*J1(0)+6*N1");
    }

    #[test]
    fn complex_eigenvalue_tokens() {
        let k: KroneckerStructure = "J2(1+2i)+J1(-0.5-1e-3i)+J1(3)".parse().unwrap();
        assert_eq!(k.blocks.len(), 3);
        assert!(k.blocks.contains(&KroneckerBlock::Finite {
            alpha: C64::new(1.0, 2.0),
            size: 2
        }));
        assert_eq!(format_complex(C64::new(-0.5, -1e-3)), "-0.5-0.001i");
        assert_eq!(format_complex(C64::new(0.9999999999997, -1e-13)), "1");
        assert_eq!(
            parse_complex("2.5e-1+1e+2i").unwrap(),
            C64::new(0.25, 100.0)
        );
    }

    #[test]
    fn rejects_bad_tokens() {
        for s in ["J0(1)", "N0", "X3", "J2", "L", "2*", "J1(nan)", "L2TT"] {
            assert!(s.parse::<KroneckerStructure>().is_err(), "{s}");
        }
    }

    #[test]
    fn canonical_block_shapes() {
        let k: KroneckerStructure = "L2+L1T+J2(3)+N2".parse().unwrap();
        let (a, b) = k.canonical();
        assert_eq!(a.shape(), (2 + 2 + 2 + 2, 3 + 1 + 2 + 2));
        assert_eq!(b.shape(), a.shape());
    }

    #[test]
    fn bundle_forgets_eigenvalues() {
        let tol = Tolerances::default();
        let a: KroneckerStructure = "L0+J2(1)+J1(1)+J1(5)".parse().unwrap();
        let b: KroneckerStructure = "L0+J2(7)+J1(7)+J1(-2)".parse().unwrap();
        assert_eq!(a.bundle(&tol), b.bundle(&tol));
        assert!(!a.same_as(&b, &tol));
    }
}
