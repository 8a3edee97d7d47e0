use super::{KroneckerStructure, MatrixPencil};
use crate::matcore::random_well_conditioned;
use crate::{Error, Result, Rng};

/// Condition number bound of the random equivalence transformations.
const SYNTH_COND: f64 = 10.0;

/// A random pencil with Kronecker structure `s`: the canonical pencil
/// multiplied by well-conditioned random matrices on both sides.
pub fn synth_pencil(s: &KroneckerStructure, rng: &mut Rng) -> Result<MatrixPencil> {
    if !s.tiles() {
        return Err(Error::Dimension(format!(
            "structure {s} does not tile {}×{}",
            s.rows, s.cols
        )));
    }
    let (a, b) = s.canonical();
    let p = random_well_conditioned(rng, s.rows, SYNTH_COND);
    let q = random_well_conditioned(rng, s.cols, SYNTH_COND);
    MatrixPencil::new(&p * a * &q, &p * b * &q)
}
