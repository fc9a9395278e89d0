//! Exact computations over Artin local algebras: minimal free resolutions,
//! Betti tables, syzygy lengths, Hilbert and Poincaré data, and verification
//! suites for length-divisibility and Betti-ratio limit laws.
//!
//! Everything is computed over a prime field GF(p) with deterministic
//! eliminations, so every basis, presentation and report is reproducible
//! bit for bit.

pub mod algebra;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod modules;
pub mod poly;
pub mod series;

#[cfg(test)]
pub(crate) mod fixtures;

pub use error::Error;
