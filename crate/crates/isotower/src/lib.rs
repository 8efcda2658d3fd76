//! Numerical and exact verification of the tower of eigenspace-restricted
//! isometry spaces.
//!
//! The crate implements the matrix functional calculus and its facial
//! extensions, the explicit NDR pairs, the tower of spaces interpolating
//! between isometries and the sphere with all of its structure maps and
//! null-homotopies, the Miller filtration charts, and exact
//! representation-ring K-theory (residues, restriction kernels, Koszul
//! complexes) for finite abelian groups.
//!
//! Every construction comes with randomized or exhaustive verification:
//! see the `examples/` directory for one runnable walk-through per
//! capability, and the `isotower` binary for the suite runner.

pub mod calculus;
pub mod error;
pub mod facial;
pub mod harness;
pub mod ktheory;
pub mod linalg;
pub mod miller;
pub mod ndr;
pub mod tower;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, EigenSystem, HermitianOperator, IsometryFrame, Projector};
