//! Exact-arithmetic Vinberg algorithm for Lorentzian integer lattices.
//!
//! The crate enumerates walls of a fundamental chamber of the reflection
//! subgroup of `O'(L)`, analyses the resulting Coxeter schemes (edge labels,
//! elliptic/parabolic subschemes, Vinberg's finite-volume criterion), emits
//! thinness certificates for the reflection subgroups generated by prefixes of
//! the run, and certifies the absence of roots by local obstructions.
//!
//! All arithmetic is over arbitrary-precision integers and rationals.

pub mod catalog;
pub mod cli;
pub mod coxeter;
pub mod engine;
pub mod enumerate;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod sieve;
pub mod symmetry;

pub use error::{Error, Result};
pub use lattice::{LatticeIsometry, QuadraticLattice, Root, RootCheck, RootRejection};
pub use linalg::{IntMatrix, Signature, SymmetricIntMatrix};
