//! Exact integer and rational matrix arithmetic.
//!
//! Everything here works over `BigInt` / `BigRational`. There is no floating
//! point anywhere in the crate: inertia, Smith forms and LDL factorizations are
//! all computed exactly.

use std::fmt;
use std::ops::{Index, Mul};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let nrows = rows.len();
        if nrows == 0 {
            return Err(Error::EmptyMatrix);
        }
        let ncols = rows[0].len();
        if ncols == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut data = Vec::with_capacity(nrows * ncols);
        for row in rows {
            if row.len() != ncols {
                return Err(Error::DimensionMismatch {
                    expected: ncols,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Self {
            rows: nrows,
            cols: ncols,
            data,
        })
    }

    /// Convenience constructor for small literal matrices.
    ///
    /// Panics on ragged or empty input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
        .expect("literal matrix must be rectangular and non-empty")
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<BigInt>]) -> Result<Self> {
        let ncols = cols.len();
        if ncols == 0 {
            return Err(Error::EmptyMatrix);
        }
        let nrows = cols[0].len();
        let mut m = Self::zeros(nrows, ncols);
        for (j, c) in cols.iter().enumerate() {
            if c.len() != nrows {
                return Err(Error::DimensionMismatch {
                    expected: nrows,
                    found: c.len(),
                });
            }
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn neg(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols, "vector length must match column count");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(BigInt::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// Largest absolute value among the entries.
    pub fn max_abs(&self) -> BigInt {
        self.data
            .iter()
            .map(|x| x.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        Ok(sign * &a[n - 1][n - 1])
    }

    pub fn pow(&self, exp: u32) -> Self {
        assert!(self.is_square());
        let mut result = Self::identity(self.rows);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        self.get(i, j)
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "incompatible matrix product");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let idx = i * rhs.cols + j;
                    out.data[idx] += a * rhs.get(k, j);
                }
            }
        }
        out
    }
}

/// Rows separated by `;`, entries by `,`.
impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(";")?;
            }
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for IntMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let rows = s
            .split(';')
            .map(parse_int_list)
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }
}

/// Parses a comma-separated list of integers.
pub fn parse_int_list(s: &str) -> Result<Vec<BigInt>> {
    s.split(',')
        .map(|tok| {
            let tok = tok.trim();
            tok.parse::<BigInt>()
                .map_err(|_| Error::Parse(format!("not an integer: {tok:?}")))
        })
        .collect()
}

/// Square symmetric integer matrix of dimension at least one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymmetricIntMatrix(IntMatrix);

impl SymmetricIntMatrix {
    pub fn new(m: IntMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        for i in 0..m.rows() {
            for j in i + 1..m.cols() {
                if m.get(i, j) != m.get(j, i) {
                    return Err(Error::NotSymmetric(i, j));
                }
            }
        }
        Ok(Self(m))
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::new(IntMatrix::from_i64(rows))
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let n = entries.len();
        let mut m = IntMatrix::zeros(n, n);
        for (i, &x) in entries.iter().enumerate() {
            m.set(i, i, BigInt::from(x));
        }
        Self(m)
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        self.0.get(i, j)
    }

    pub fn as_matrix(&self) -> &IntMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> IntMatrix {
        self.0
    }

    /// `xᵀ·M·y`.
    pub fn bilinear(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        let my = self.0.mul_vec(y);
        x.iter()
            .zip(&my)
            .fold(BigInt::zero(), |acc, (a, b)| acc + a * b)
    }

    /// Congruence transform `Bᵀ·M·B`.
    pub fn congruence(&self, b: &IntMatrix) -> SymmetricIntMatrix {
        SymmetricIntMatrix(&(&b.transpose() * &self.0) * b)
    }

    pub fn principal_submatrix(&self, indices: &[usize]) -> SymmetricIntMatrix {
        let k = indices.len();
        let mut m = IntMatrix::zeros(k, k);
        for (a, &i) in indices.iter().enumerate() {
            for (b, &j) in indices.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        SymmetricIntMatrix(m)
    }
}

impl fmt::Display for SymmetricIntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for SymmetricIntMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::new(s.parse()?)
    }
}

/// Inertia of a symmetric matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Signature {
    pub fn new(positive: usize, negative: usize, zero: usize) -> Self {
        Self {
            positive,
            negative,
            zero,
        }
    }

    pub fn dim(&self) -> usize {
        self.positive + self.negative + self.zero
    }

    pub fn as_array(&self) -> [usize; 3] {
        [self.positive, self.negative, self.zero]
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.positive, self.negative, self.zero)
    }
}

fn to_rational_rows(m: &IntMatrix) -> Vec<Vec<BigRational>> {
    (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect()
        })
        .collect()
}

fn remove_indices<T: Clone>(a: &[Vec<T>], drop: &[usize]) -> Vec<Vec<T>> {
    a.iter()
        .enumerate()
        .filter(|(i, _)| !drop.contains(i))
        .map(|(_, row)| {
            row.iter()
                .enumerate()
                .filter(|(j, _)| !drop.contains(j))
                .map(|(_, x)| x.clone())
                .collect()
        })
        .collect()
}

/// Exact inertia by symmetric Gaussian elimination over the rationals.
///
/// Nonzero diagonal entries are used as 1×1 pivots. When the diagonal of the
/// remaining block vanishes but some off-diagonal entry `b` does not, the
/// hyperbolic plane `[[0, b], [b, 0]]` is split off as a 2×2 pivot; it
/// contributes one positive and one negative direction. A remaining zero block
/// counts toward the nullity.
pub fn signature(m: &SymmetricIntMatrix) -> Signature {
    let mut a = to_rational_rows(m.as_matrix());
    let mut sig = Signature::new(0, 0, 0);
    while !a.is_empty() {
        let n = a.len();
        if let Some(p) = (0..n).find(|&i| !a[i][i].is_zero()) {
            let pivot = a[p][p].clone();
            if pivot.is_positive() {
                sig.positive += 1;
            } else {
                sig.negative += 1;
            }
            for i in 0..n {
                if i == p || a[i][p].is_zero() {
                    continue;
                }
                let f = &a[i][p] / &pivot;
                for j in 0..n {
                    if j != p {
                        let delta = &f * &a[p][j];
                        a[i][j] -= delta;
                    }
                }
            }
            a = remove_indices(&a, &[p]);
            continue;
        }
        let off = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .find(|&(i, j)| !a[i][j].is_zero());
        match off {
            Some((p, q)) => {
                sig.positive += 1;
                sig.negative += 1;
                let b = a[p][q].clone();
                let mut next = a.clone();
                for i in 0..n {
                    if i == p || i == q {
                        continue;
                    }
                    for j in 0..n {
                        if j == p || j == q {
                            continue;
                        }
                        let delta = (&a[i][p] * &a[q][j] + &a[i][q] * &a[p][j]) / &b;
                        next[i][j] -= delta;
                    }
                }
                a = remove_indices(&next, &[p, q]);
            }
            None => {
                sig.zero += n;
                break;
            }
        }
    }
    sig
}

/// Smith normal form `D = U·M·V` with unimodular `U` and `V`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    /// Diagonal of `D`, non-negative, each dividing the next (zeros last).
    pub diagonal: Vec<BigInt>,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

fn swap_rows(a: &mut [Vec<BigInt>], i: usize, j: usize) {
    a.swap(i, j);
}

fn swap_cols(a: &mut [Vec<BigInt>], i: usize, j: usize) {
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

/// row_dst -= q·row_src
fn row_axpy(a: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    let src_row = a[src].clone();
    for (x, s) in a[dst].iter_mut().zip(&src_row) {
        *x -= q * s;
    }
}

/// col_dst -= q·col_src
fn col_axpy(a: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    for row in a.iter_mut() {
        let s = row[src].clone();
        row[dst] -= q * s;
    }
}

/// Smith normal form by elementary integer row and column operations.
pub fn smith_form(m: &IntMatrix) -> SmithForm {
    let (r, c) = (m.rows(), m.cols());
    let mut a = m.to_rows();
    let mut u = IntMatrix::identity(r).to_rows();
    let mut v = IntMatrix::identity(c).to_rows();
    let steps = r.min(c);

    'outer: for t in 0..steps {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    if a[i][j].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break 'outer;
            };
            swap_rows(&mut a, t, pi);
            swap_rows(&mut u, t, pi);
            swap_cols(&mut a, t, pj);
            swap_cols(&mut v, t, pj);

            let mut clean = true;
            for i in t + 1..r {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                row_axpy(&mut a, i, t, &q);
                row_axpy(&mut u, i, t, &q);
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..c {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                col_axpy(&mut a, j, t, &q);
                col_axpy(&mut v, j, t, &q);
                clean &= a[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            let bad_row =
                (t + 1..r).find(|&i| (t + 1..c).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            match bad_row {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_axpy(&mut a, t, i, &minus_one);
                    row_axpy(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -&*x;
            }
            for x in u[t].iter_mut() {
                *x = -&*x;
            }
        }
    }

    SmithForm {
        diagonal: (0..steps).map(|i| a[i][i].clone()).collect(),
        left: IntMatrix::from_rows(u).expect("non-empty"),
        right: IntMatrix::from_rows(v).expect("non-empty"),
    }
}

/// Smith invariant factors `s_1 | s_2 | … | s_n` of a nonsingular matrix.
pub fn invariant_factors(m: &SymmetricIntMatrix) -> Result<Vec<BigInt>> {
    let snf = smith_form(m.as_matrix());
    if snf.diagonal.iter().any(Zero::is_zero) {
        return Err(Error::SingularMatrix);
    }
    Ok(snf.diagonal)
}

/// gcd of all entries; zero for the zero vector.
pub fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

pub fn is_primitive(v: &[BigInt]) -> Result<bool> {
    let g = content(v);
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(g.is_one())
}

/// Divides out the content of a nonzero vector.
pub fn primitive_part(v: &[BigInt]) -> Vec<BigInt> {
    let g = content(v);
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

pub fn dot(x: &[BigInt], y: &[BigInt]) -> BigInt {
    x.iter()
        .zip(y)
        .fold(BigInt::zero(), |acc, (a, b)| acc + a * b)
}

pub fn to_bigint_vec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// `A = L·D·Lᵀ` for a symmetric matrix with nonzero leading principal minors;
/// `L` is unit lower triangular. Returns `None` when a pivot vanishes.
pub fn ldl(m: &SymmetricIntMatrix) -> Option<(Vec<Vec<BigRational>>, Vec<BigRational>)> {
    let n = m.dim();
    let a = to_rational_rows(m.as_matrix());
    let mut l = vec![vec![BigRational::zero(); n]; n];
    let mut d = vec![BigRational::zero(); n];
    for j in 0..n {
        let mut dj = a[j][j].clone();
        for k in 0..j {
            dj -= &l[j][k] * &l[j][k] * &d[k];
        }
        if dj.is_zero() {
            return None;
        }
        l[j][j] = BigRational::one();
        for i in j + 1..n {
            let mut s = a[i][j].clone();
            for k in 0..j {
                s -= &l[i][k] * &l[j][k] * &d[k];
            }
            l[i][j] = s / &dj;
        }
        d[j] = dj;
    }
    Some((l, d))
}

/// Solves `M·x = b` exactly for nonsingular square `M`.
pub fn solve_rational(m: &IntMatrix, b: &[BigRational]) -> Result<Vec<BigRational>> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    if b.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b.len(),
        });
    }
    let mut a = to_rational_rows(m);
    let mut rhs = b.to_vec();
    for col in 0..n {
        let p = (col..n)
            .find(|&i| !a[i][col].is_zero())
            .ok_or(Error::SingularMatrix)?;
        a.swap(col, p);
        rhs.swap(col, p);
        let pivot = a[col][col].clone();
        for i in 0..n {
            if i == col || a[i][col].is_zero() {
                continue;
            }
            let f = &a[i][col] / &pivot;
            for j in col..n {
                let delta = &f * &a[col][j];
                a[i][j] -= delta;
            }
            let delta = &f * &rhs[col];
            rhs[i] -= delta;
        }
    }
    Ok((0..n).map(|i| &rhs[i] / &a[i][i]).collect())
}

/// Inverse of a unimodular integer matrix.
pub fn unimodular_inverse(m: &IntMatrix) -> Result<IntMatrix> {
    let n = m.rows();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let e: Vec<BigRational> = (0..n)
            .map(|i| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            })
            .collect();
        let x = solve_rational(m, &e)?;
        if x.iter().any(|q| !q.is_integer()) {
            return Err(Error::SingularMatrix);
        }
        cols.push(x.into_iter().map(|q| q.to_integer()).collect::<Vec<_>>());
    }
    IntMatrix::from_columns(&cols)
}

/// Hermite normal form of a nonsingular basis given as columns: the result
/// spans the same lattice, is lower triangular with positive diagonal, and
/// every entry left of a diagonal entry in its row lies in `[0, pivot)`.
pub fn hermite_basis(basis: &IntMatrix) -> Result<IntMatrix> {
    let n = basis.rows();
    if basis.cols() != n {
        return Err(Error::NotSquare {
            rows: n,
            cols: basis.cols(),
        });
    }
    // row operations on the transpose act on the basis vectors
    let mut a = basis.transpose().to_rows();
    for t in 0..n {
        loop {
            let pivot = (t..n)
                .filter(|&i| !a[i][t].is_zero())
                .min_by(|&i, &j| a[i][t].abs().cmp(&a[j][t].abs()));
            let Some(p) = pivot else {
                return Err(Error::SingularMatrix);
            };
            a.swap(t, p);
            let mut clean = true;
            for i in t + 1..n {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                row_axpy(&mut a, i, t, &q);
                clean &= a[i][t].is_zero();
            }
            if clean {
                break;
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -&*x;
            }
        }
        for i in 0..t {
            let q = a[i][t].div_floor(&a[t][t]);
            row_axpy(&mut a, i, t, &q);
        }
    }
    Ok(IntMatrix::from_rows(a)?.transpose())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        to_bigint_vec(v)
    }

    fn gram_41() -> SymmetricIntMatrix {
        SymmetricIntMatrix::from_i64(&[&[3, 7, 49], &[7, 0, 0], &[49, 0, 49]]).unwrap()
    }

    #[test]
    fn signature_of_lorentzian_form() {
        assert_eq!(signature(&gram_41()), Signature::new(2, 1, 0));
        assert_eq!(
            signature(&SymmetricIntMatrix::diagonal(&[1, 1, 1])),
            Signature::new(3, 0, 0)
        );
    }

    #[test]
    fn signature_needs_two_by_two_pivot() {
        let h = SymmetricIntMatrix::from_i64(&[&[0, 5], &[5, 0]]).unwrap();
        assert_eq!(signature(&h), Signature::new(1, 1, 0));
        let z = SymmetricIntMatrix::from_i64(&[&[0, 0], &[0, 0]]).unwrap();
        assert_eq!(signature(&z), Signature::new(0, 0, 2));
        let mixed = SymmetricIntMatrix::from_i64(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 0]]).unwrap();
        assert_eq!(signature(&mixed), Signature::new(1, 1, 1));
    }

    #[test]
    fn signature_of_root_gram_of_first_four_roots() {
        // pairwise inner products of v1..v4 in the form 3x0²+14x0x1+98x0x2+49x2²
        let g = SymmetricIntMatrix::from_i64(&[
            &[49, -98, -49, -245],
            &[-98, 49, -245, -49],
            &[-49, -245, 49, -1813],
            &[-245, -49, -1813, 49],
        ])
        .unwrap();
        assert_eq!(signature(&g), Signature::new(2, 1, 1));
    }

    #[test]
    fn invariant_factors_examples() {
        let n = SymmetricIntMatrix::from_i64(&[&[0, 0, 49], &[0, 49, 7], &[49, 7, 3]]).unwrap();
        assert_eq!(invariant_factors(&n).unwrap(), big(&[1, 49, 2401]));
        assert_eq!(invariant_factors(&gram_41()).unwrap(), big(&[1, 49, 49]));
        assert_eq!(
            invariant_factors(&SymmetricIntMatrix::diagonal(&[1, 1, 1, 1])).unwrap(),
            big(&[1, 1, 1, 1])
        );
        assert_eq!(
            invariant_factors(&SymmetricIntMatrix::diagonal(&[2, 4])).unwrap(),
            big(&[2, 4])
        );
        assert_eq!(
            invariant_factors(&SymmetricIntMatrix::diagonal(&[4, 6])).unwrap(),
            big(&[2, 12])
        );
    }

    #[test]
    fn singular_matrix_has_no_invariant_factors() {
        let m = SymmetricIntMatrix::from_i64(&[&[1, 2], &[2, 4]]).unwrap();
        assert_eq!(invariant_factors(&m), Err(Error::SingularMatrix));
    }

    #[test]
    fn smith_transforms_reproduce_diagonal() {
        let m = IntMatrix::from_i64(&[&[6, 14, 98], &[4, 0, 0]]);
        let s = smith_form(&m);
        let d = &(&s.left * &m) * &s.right;
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                let expect = if i == j {
                    s.diagonal[i].clone()
                } else {
                    BigInt::zero()
                };
                assert_eq!(d[(i, j)], expect);
            }
        }
        assert_eq!(s.left.determinant().unwrap().abs(), BigInt::one());
        assert_eq!(s.right.determinant().unwrap().abs(), BigInt::one());
    }

    #[test]
    fn primitivity() {
        assert!(is_primitive(&big(&[0, 7, -1])).unwrap());
        assert!(!is_primitive(&big(&[0, 14, -2])).unwrap());
        assert!(is_primitive(&big(&[-42, -24, 5])).unwrap());
        assert_eq!(is_primitive(&big(&[0, 0, 0])), Err(Error::ZeroVector));
    }

    #[test]
    fn determinant_and_inverse() {
        assert_eq!(
            gram_41().as_matrix().determinant().unwrap(),
            BigInt::from(-2401)
        );
        let u = IntMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        let inv = unimodular_inverse(&u).unwrap();
        assert!((&u * &inv).is_identity());
        assert_eq!(
            unimodular_inverse(&IntMatrix::from_i64(&[&[2, 0], &[0, 1]])),
            Err(Error::SingularMatrix)
        );
    }

    #[test]
    fn parsing_rejects_asymmetric_input() {
        assert!("1,2;3,4".parse::<SymmetricIntMatrix>().is_err());
        assert!("1,2;2".parse::<SymmetricIntMatrix>().is_err());
        assert_eq!(
            "3,7,49;7,0,0;49,0,49"
                .parse::<SymmetricIntMatrix>()
                .unwrap(),
            gram_41()
        );
    }

    #[test]
    fn ldl_reconstructs_matrix() {
        let a = SymmetricIntMatrix::from_i64(&[&[4, 2, 1], &[2, 5, 3], &[1, 3, 6]]).unwrap();
        let (l, d) = ldl(&a).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let mut s = BigRational::zero();
                for k in 0..3 {
                    s += &l[i][k] * &d[k] * &l[j][k];
                }
                assert_eq!(s, BigRational::from_integer(a.get(i, j).clone()));
            }
        }
    }
}
