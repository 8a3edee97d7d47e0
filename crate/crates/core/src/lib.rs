//! Singular two-parameter eigenvalue problems solved through operator
//! determinants, together with the Kronecker-structure toolkit for singular
//! matrix pencils that the solver depends on.
//!
//! The crate is organised bottom-up:
//!
//! * [`matcore`]: dense complex primitives, tolerance-aware subspaces and a
//!   complex QZ iteration.
//! * [`pencil`]: analysis of a single pencil `A - λB` (normal rank, minimal
//!   bases, generic kernels, reducing subspaces, Kronecker structure and
//!   chains).
//! * [`tensorker`]: kernels of tensor operators `A⊗D - B⊗C`.
//! * [`strat`]: bundle stratification moves and the `T(α)` interaction count.
//! * [`twopar`]: the two-parameter problem and its solver.
//! * [`io`], [`corpus`], [`cli`]: file formats, the bundled example corpus
//!   and the command-line front end.

pub mod cli;
pub mod corpus;
pub mod error;
pub mod io;
pub mod matcore;
pub mod pencil;
pub mod strat;
pub mod tensorker;
pub mod tol;
pub mod twopar;

pub use error::{Error, Result};
pub use matcore::{CMatrix, CVector, Subspace};
pub use pencil::{KroneckerBlock, KroneckerStructure, MatrixPencil};
pub use tol::Tolerances;
pub use twopar::{DeltaSystem, TwoParameterProblem};

pub use num_complex::Complex64 as C64;

/// Deterministic generator used everywhere randomness is needed.
pub type Rng = rand_chacha::ChaCha8Rng;

/// Builds the crate's generator from a 64-bit seed.
pub fn rng_from_seed(seed: u64) -> Rng {
    use rand::SeedableRng;
    Rng::seed_from_u64(seed)
}
