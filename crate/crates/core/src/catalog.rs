//! Worked lattices used throughout the tests, the acceptance suite and the CLI.

use num_bigint::BigInt;

use crate::lattice::QuadraticLattice;
use crate::linalg::{to_bigint_vec, IntMatrix, SymmetricIntMatrix};

/// `3x0² + 14x0x1 + 98x0x2 + 49x2²`: non-reflective, with roots.
pub fn thin_lattice() -> QuadraticLattice {
    let gram =
        SymmetricIntMatrix::from_i64(&[&[3, 7, 49], &[7, 0, 0], &[49, 0, 49]]).expect("symmetric");
    QuadraticLattice::new(gram).expect("Lorentzian")
}

/// Sixteen walls of a fundamental chamber of [`thin_lattice`].
pub const THIN_LATTICE_ROOTS: [[i64; 3]; 16] = [
    [0, 7, -1],
    [-7, -11, 2],
    [0, 0, 1],
    [-42, -24, 5],
    [-98, 14, 1],
    [-140, -31, 9],
    [-168, -12, 7],
    [-21, -61, 14],
    [-42, -94, 19],
    [-329, 22, 7],
    [-42, -108, 23],
    [-252, -74, 19],
    [-273, -37, 14],
    [-28, -86, 21],
    [-56, -151, 33],
    [-49, -154, 39],
];

pub fn thin_lattice_roots() -> Vec<Vec<BigInt>> {
    THIN_LATTICE_ROOTS
        .iter()
        .map(|v| to_bigint_vec(v))
        .collect()
}

/// Reflection matrices of the first four roots in [`THIN_LATTICE_ROOTS`].
pub fn thin_lattice_reflections() -> [IntMatrix; 4] {
    [
        IntMatrix::from_i64(&[&[1, 0, 0], &[0, 1, 14], &[0, 0, -1]]),
        IntMatrix::from_i64(&[&[1, -14, -70], &[0, -21, -110], &[0, 4, 21]]),
        IntMatrix::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[-2, 0, -1]]),
        IntMatrix::from_i64(&[&[-83, -504, -3108], &[-48, -287, -1776], &[10, 60, 371]]),
    ]
}

/// `49x1² + 98x0x2 + 14x1x2 + 3x2²`: a Lorentzian lattice without roots.
pub fn rootless_lattice() -> QuadraticLattice {
    let gram =
        SymmetricIntMatrix::from_i64(&[&[0, 0, 49], &[0, 49, 7], &[49, 7, 3]]).expect("symmetric");
    QuadraticLattice::new(gram).expect("Lorentzian")
}

/// `x0² + x1² − x2²`, the classical reflective example.
pub fn unimodular_plane() -> QuadraticLattice {
    QuadraticLattice::new(SymmetricIntMatrix::diagonal(&[1, 1, -1])).expect("Lorentzian")
}
