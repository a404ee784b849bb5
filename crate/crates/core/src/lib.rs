//! Exact lattice and Diophantine computations for wall-and-chamber structures on
//! moduli of sheaves on K3 surfaces.
//!
//! Everything is computed with arbitrary-precision integers and rationals.

pub mod arith;
pub mod cones;
pub mod error;
pub mod flops;
pub mod hilbert;
pub mod diophantine;
pub mod lattice;
pub mod oracle;
pub mod wall;

pub use error::{Error, Result};
pub use lattice::{Lattice, MukaiVector, Signature, Sublattice};
