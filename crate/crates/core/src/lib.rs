//! Two-particle Bose-Hubbard chain with a single impurity site.
//!
//! The crate builds the pair-basis Hamiltonian and its parity sectors, diagonalizes
//! them in double or arbitrary precision, solves the Bethe equations of the odd
//! sector band by band, tests eigenstates for the Bethe form with Prony's method
//! and computes momentum-space diagnostics.

pub mod bethe;
pub mod diag;
pub mod error;
pub mod field;
pub mod lattice;
pub mod momentum;
#[cfg(feature = "mp")]
pub mod mp;
pub mod poly;
pub mod prony;

pub use error::{Error, Result};
pub use lattice::{Bc, LatticeSpec, Parity, SectorBasis, WaveFunction};

/// Complex double used throughout the analytic code.
pub type C64 = num_complex::Complex<f64>;
