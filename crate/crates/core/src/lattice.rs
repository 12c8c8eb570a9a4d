//! Lorentzian lattices, roots and their reflections.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix, Signature, SymmetricIntMatrix};

/// An integral lattice `ℤ^{d+1}` with a bilinear form of signature `(d, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticLattice {
    gram: SymmetricIntMatrix,
    d: usize,
}

impl QuadraticLattice {
    /// Fails with [`Error::NotLorentzian`] unless the signature is `(d, 1, 0)`
    /// with `d ≥ 1`.
    pub fn new(gram: SymmetricIntMatrix) -> Result<Self> {
        let sig = linalg::signature(&gram);
        if sig.negative != 1 || sig.zero != 0 || sig.positive == 0 {
            return Err(Error::NotLorentzian(sig));
        }
        Ok(Self {
            d: sig.positive,
            gram,
        })
    }

    /// Builds the Gram matrix from polynomial coefficients given as the upper
    /// triangle: `coeffs[i][j - i]` is the coefficient of `x_i x_j` (the square
    /// term when `i == j`). Cross coefficients must be even.
    pub fn from_form(coeffs: &[Vec<BigInt>]) -> Result<Self> {
        let n = coeffs.len();
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut m = IntMatrix::zeros(n, n);
        for (i, row) in coeffs.iter().enumerate() {
            if row.len() != n - i {
                return Err(Error::DimensionMismatch {
                    expected: n - i,
                    found: row.len(),
                });
            }
            m.set(i, i, row[0].clone());
            for (off, c) in row.iter().enumerate().skip(1) {
                let j = i + off;
                if c.is_odd() {
                    return Err(Error::OddCrossCoefficient {
                        i,
                        j,
                        value: c.clone(),
                    });
                }
                let half: BigInt = c / 2;
                m.set(i, j, half.clone());
                m.set(j, i, half);
            }
        }
        Self::new(SymmetricIntMatrix::new(m)?)
    }

    pub fn gram(&self) -> &SymmetricIntMatrix {
        &self.gram
    }

    /// Hyperbolic dimension `d`; vectors have `d + 1` coordinates.
    pub fn hyperbolic_dim(&self) -> usize {
        self.d
    }

    pub fn rank(&self) -> usize {
        self.d + 1
    }

    pub fn signature(&self) -> Signature {
        Signature::new(self.d, 1, 0)
    }

    fn check_len(&self, v: &[BigInt]) -> Result<()> {
        if v.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                found: v.len(),
            });
        }
        Ok(())
    }

    pub fn inner(&self, x: &[BigInt], y: &[BigInt]) -> Result<BigInt> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.gram.bilinear(x, y))
    }

    pub fn norm(&self, x: &[BigInt]) -> Result<BigInt> {
        self.inner(x, x)
    }

    /// `gram · x`, i.e. the inner products of `x` with the basis vectors.
    pub fn dual_coordinates(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        self.check_len(x)?;
        Ok(self.gram.as_matrix().mul_vec(x))
    }

    pub fn is_root(&self, e: &[BigInt]) -> Result<RootCheck> {
        self.check_len(e)?;
        if !linalg::is_primitive(e)? {
            return Ok(RootCheck::Rejected(RootRejection::NotPrimitive));
        }
        let norm = self.gram.bilinear(e, e);
        if !norm.is_positive() {
            return Ok(RootCheck::Rejected(RootRejection::NonPositiveNorm(norm)));
        }
        let ge = self.gram.as_matrix().mul_vec(e);
        for (index, x) in ge.iter().enumerate() {
            let twice: BigInt = x * 2;
            if !twice.is_multiple_of(&norm) {
                return Ok(RootCheck::Rejected(RootRejection::NotCrystallographic {
                    index,
                    inner: x.clone(),
                    norm,
                }));
            }
        }
        Ok(RootCheck::Accepted(Root {
            vector: e.to_vec(),
            norm,
        }))
    }

    /// Validates `e` as a root, turning a rejection into [`Error::NotARoot`].
    pub fn root(&self, e: &[BigInt]) -> Result<Root> {
        match self.is_root(e)? {
            RootCheck::Accepted(r) => Ok(r),
            RootCheck::Rejected(why) => Err(Error::NotARoot(why)),
        }
    }

    pub fn root_i64(&self, e: &[i64]) -> Result<Root> {
        self.root(&linalg::to_bigint_vec(e))
    }

    /// Matrix of `x ↦ x − 2(e,x)/(e,e)·e` acting on column vectors.
    pub fn reflection_matrix(&self, e: &Root) -> Result<LatticeIsometry> {
        // re-validate: the root may come from a different lattice
        let root = self.root(e.vector())?;
        let n = self.rank();
        let ge = self.gram.as_matrix().mul_vec(root.vector());
        let mut m = IntMatrix::identity(n);
        for i in 0..n {
            for j in 0..n {
                let num: BigInt = &root.vector[i] * &ge[j] * 2;
                let delta = num / &root.norm;
                let entry = m.get(i, j) - delta;
                m.set(i, j, entry);
            }
        }
        Ok(LatticeIsometry { matrix: m })
    }

    /// Wraps `u` as an isometry, checking `uᵀ·G·u = G`.
    pub fn isometry(&self, u: IntMatrix) -> Result<LatticeIsometry> {
        if u.rows() != self.rank() || u.cols() != self.rank() {
            return Err(Error::NotAnIsometry);
        }
        if self.gram.congruence(&u) != self.gram {
            return Err(Error::NotAnIsometry);
        }
        Ok(LatticeIsometry { matrix: u })
    }
}

/// Why a vector failed the root test. The first failing condition is reported.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootRejection {
    NotPrimitive,
    NonPositiveNorm(BigInt),
    NotCrystallographic {
        index: usize,
        inner: BigInt,
        norm: BigInt,
    },
}

impl fmt::Display for RootRejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootRejection::NotPrimitive => f.write_str("not primitive"),
            RootRejection::NonPositiveNorm(n) => write!(f, "non-positive norm {n}"),
            RootRejection::NotCrystallographic { index, inner, norm } => write!(
                f,
                "2*(e, b{index}) = {} is not divisible by the norm {norm}",
                inner * 2
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootCheck {
    Accepted(Root),
    Rejected(RootRejection),
}

impl RootCheck {
    pub fn is_accepted(&self) -> bool {
        matches!(self, RootCheck::Accepted(_))
    }
}

/// A primitive positive-norm crystallographic vector. Only constructed
/// through [`QuadraticLattice::is_root`], so the stored norm always matches.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Root {
    vector: Vec<BigInt>,
    norm: BigInt,
}

impl Root {
    pub fn vector(&self) -> &[BigInt] {
        &self.vector
    }

    pub fn norm(&self) -> &BigInt {
        &self.norm
    }

    pub fn negated(&self) -> Root {
        Root {
            vector: self.vector.iter().map(|x| -x).collect(),
            norm: self.norm.clone(),
        }
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.vector.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

/// Integer matrix preserving the Gram matrix. Acts on column vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeIsometry {
    matrix: IntMatrix,
}

impl LatticeIsometry {
    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> IntMatrix {
        self.matrix
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.matrix.mul_vec(v)
    }

    pub fn compose(&self, other: &LatticeIsometry) -> LatticeIsometry {
        LatticeIsometry {
            matrix: &self.matrix * &other.matrix,
        }
    }

    pub fn inverse(&self) -> LatticeIsometry {
        LatticeIsometry {
            matrix: linalg::unimodular_inverse(&self.matrix)
                .expect("lattice isometries are unimodular"),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity()
    }

    pub fn determinant(&self) -> BigInt {
        self.matrix.determinant().expect("square")
    }

    pub fn identity(n: usize) -> LatticeIsometry {
        LatticeIsometry {
            matrix: IntMatrix::identity(n),
        }
    }

    pub fn is_involution(&self) -> bool {
        (&self.matrix * &self.matrix).is_identity()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use num_traits::Zero;

    #[test]
    fn lorentzian_check() {
        let l = catalog::thin_lattice();
        assert_eq!(l.hyperbolic_dim(), 2);
        let euclid = SymmetricIntMatrix::from_i64(&[&[1, 0], &[0, 1]]).unwrap();
        assert_eq!(
            QuadraticLattice::new(euclid),
            Err(Error::NotLorentzian(Signature::new(2, 0, 0)))
        );
        let two_negative = SymmetricIntMatrix::diagonal(&[1, -1, -1]);
        assert!(QuadraticLattice::new(two_negative).is_err());
    }

    #[test]
    fn form_coefficients_map_to_gram() {
        let c = |v: &[i64]| linalg::to_bigint_vec(v);
        let l = QuadraticLattice::from_form(&[c(&[3, 14, 98]), c(&[0, 0]), c(&[49])]).unwrap();
        assert_eq!(l, catalog::thin_lattice());
        let odd = QuadraticLattice::from_form(&[c(&[1, 3]), c(&[-1])]);
        assert!(matches!(
            odd,
            Err(Error::OddCrossCoefficient { i: 0, j: 1, .. })
        ));
    }

    #[test]
    fn inner_products() {
        let l = catalog::thin_lattice();
        let v = catalog::thin_lattice_roots();
        assert_eq!(l.inner(&v[0], &v[0]).unwrap(), BigInt::from(49));
        assert_eq!(l.inner(&v[0], &v[2]).unwrap(), BigInt::from(-49));
        let zero = linalg::to_bigint_vec(&[0, 0, 0]);
        assert!(l.inner(&zero, &zero).unwrap().is_zero());
        assert!(matches!(
            l.inner(&zero, &linalg::to_bigint_vec(&[1, 2])),
            Err(Error::DimensionMismatch {
                expected: 3,
                found: 2
            })
        ));
    }

    #[test]
    fn root_rejections() {
        let l = catalog::thin_lattice();
        let check = |v: &[i64]| l.is_root(&linalg::to_bigint_vec(v));
        assert_eq!(
            check(&[0, 14, -2]).unwrap(),
            RootCheck::Rejected(RootRejection::NotPrimitive)
        );
        assert_eq!(
            check(&[1, 1, -1]).unwrap(),
            RootCheck::Rejected(RootRejection::NonPositiveNorm(BigInt::from(-32)))
        );
        // norm 3, 2*(e, b1) = 14 is not a multiple of 3
        assert!(matches!(
            check(&[1, 0, 0]).unwrap(),
            RootCheck::Rejected(RootRejection::NotCrystallographic { index: 1, .. })
        ));
        assert_eq!(check(&[0, 0, 0]), Err(Error::ZeroVector));
    }

    #[test]
    fn root_predicate_is_sign_symmetric() {
        let l = catalog::thin_lattice();
        for v in catalog::thin_lattice_roots() {
            let neg: Vec<BigInt> = v.iter().map(|x| -x).collect();
            assert!(l.is_root(&v).unwrap().is_accepted());
            assert!(l.is_root(&neg).unwrap().is_accepted());
        }
    }

    #[test]
    fn reflection_properties() {
        let l = catalog::thin_lattice();
        for v in catalog::thin_lattice_roots() {
            let e = l.root(&v).unwrap();
            let r = l.reflection_matrix(&e).unwrap();
            assert!(r.is_involution());
            assert_eq!(l.gram().congruence(r.matrix()), *l.gram());
            assert_eq!(r.apply(e.vector()), e.negated().vector().to_vec());
            assert_eq!(r.determinant(), BigInt::from(-1));
        }
    }

    #[test]
    fn reflection_acts_on_columns() {
        let l = catalog::thin_lattice();
        let r3 = l
            .reflection_matrix(&l.root_i64(&[0, 0, 1]).unwrap())
            .unwrap();
        assert_eq!(
            r3.apply(&linalg::to_bigint_vec(&[1, 0, 0])),
            linalg::to_bigint_vec(&[1, 0, -2])
        );
    }

    #[test]
    fn isometry_validation() {
        let l = catalog::thin_lattice();
        assert!(l.isometry(IntMatrix::identity(3)).is_ok());
        assert!(l.isometry(IntMatrix::identity(3).neg()).is_ok());
        let bad = IntMatrix::from_i64(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(l.isometry(bad), Err(Error::NotAnIsometry));
    }
}
