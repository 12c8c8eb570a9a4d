//! Lattice isometries extending a partial pairing of roots, and their orders.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::{LatticeIsometry, QuadraticLattice, Root};
use crate::linalg::{self, IntMatrix};

/// Default sup-norm bound on the coordinates swept for the free part of an
/// extension.
pub const DEFAULT_PAIRING_BOUND: u64 = 1000;

/// Isometries found by [`extend_pairing`], tagged with the box bound used.
/// An empty list only means nothing was found inside the box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingSearch {
    pub bound: u64,
    pub isometries: Vec<LatticeIsometry>,
}

/// Searches for integer `U` with `Uᵀ·G·U = G` and `U·a = b` for every pair
/// `(a, b)`.
///
/// The images of the paired roots fix `U` on their span. On the orthogonal
/// complement `U` must map a saturated basis of `a⊥` into `b⊥`, so the images
/// are written in a saturated basis of `b⊥` and their coordinates are swept
/// over `[-bound, bound]`, keeping only those matching the Gram matrix of
/// `a⊥`. Cost grows like `(2·bound + 1)^s` where `s` is the corank of the
/// pairing.
pub fn extend_pairing(
    lattice: &QuadraticLattice,
    pairs: &[(Root, Root)],
    bound: u64,
) -> Result<PairingSearch> {
    let n = lattice.rank();
    for (a, b) in pairs {
        if a.vector().len() != n || b.vector().len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: a.vector().len().min(b.vector().len()),
            });
        }
        if a.norm() != b.norm() {
            return Err(Error::NormMismatch(a.norm().clone(), b.norm().clone()));
        }
    }
    let empty = PairingSearch {
        bound,
        isometries: Vec::new(),
    };
    for (a1, b1) in pairs {
        for (a2, b2) in pairs {
            if lattice.inner(a1.vector(), a2.vector())?
                != lattice.inner(b1.vector(), b2.vector())?
            {
                return Ok(empty);
            }
        }
    }

    let mut sources: Vec<Vec<BigInt>> = Vec::new();
    let mut targets: Vec<Vec<BigInt>> = Vec::new();
    for (a, b) in pairs {
        let mut trial = sources.clone();
        trial.push(a.vector().to_vec());
        if rank(&trial) > sources.len() {
            sources = trial;
            targets.push(b.vector().to_vec());
        }
    }
    let r = sources.len();
    let complement_a = orthogonal_kernel(lattice, &sources);
    let complement_b = orthogonal_kernel(lattice, &targets);
    let s = n - r;

    let mut frame_cols = sources.clone();
    frame_cols.extend(complement_a.iter().cloned());
    let frame = IntMatrix::from_columns(&frame_cols)?;
    if frame.determinant()?.is_zero() {
        return Err(Error::DegeneratePairing);
    }
    let frame_inv = rational_inverse(&frame)?;

    let gram = lattice.gram();
    let want: Vec<Vec<BigInt>> = (0..s)
        .map(|i| {
            (0..s)
                .map(|j| gram.bilinear(&complement_a[i], &complement_a[j]))
                .collect()
        })
        .collect();
    let h: Vec<Vec<BigInt>> = (0..s)
        .map(|i| {
            (0..s)
                .map(|j| gram.bilinear(&complement_b[i], &complement_b[j]))
                .collect()
        })
        .collect();

    let choices = if s == 0 {
        vec![Vec::new()]
    } else {
        let columns = sweep_columns(&h, &want, bound)?;
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(s);
        assemble(&columns, &h, &want, &mut current, &mut out);
        out
    };

    let mut found = BTreeSet::new();
    for ys in choices {
        let mut image = targets.clone();
        for y in &ys {
            let mut v = vec![BigInt::zero(); n];
            for (k, coeff) in y.iter().enumerate() {
                for (vi, di) in v.iter_mut().zip(&complement_b[k]) {
                    *vi += di * coeff;
                }
            }
            image.push(v);
        }
        if let Some(u) = apply_inverse(&image, &frame_inv) {
            if pairs
                .iter()
                .all(|(a, b)| u.mul_vec(a.vector()) == b.vector())
            {
                if let Ok(iso) = lattice.isometry(u) {
                    found.insert(iso.into_matrix().to_rows());
                }
            }
        }
    }
    let isometries = found
        .into_iter()
        .map(|rows| {
            let m = IntMatrix::from_rows(rows).expect("rectangular");
            lattice.isometry(m).expect("checked above")
        })
        .collect();
    Ok(PairingSearch { bound, isometries })
}

fn rank(cols: &[Vec<BigInt>]) -> usize {
    if cols.is_empty() {
        return 0;
    }
    let m = IntMatrix::from_columns(cols).expect("equal lengths");
    linalg::smith_form(&m)
        .diagonal
        .iter()
        .filter(|d| !d.is_zero())
        .count()
}

/// Saturated integer basis of `{x : (v, x) = 0 for all v}`.
fn orthogonal_kernel(lattice: &QuadraticLattice, vs: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = lattice.rank();
    if vs.is_empty() {
        return IntMatrix::identity(n).to_rows();
    }
    let rows: Vec<Vec<BigInt>> = vs
        .iter()
        .map(|v| lattice.dual_coordinates(v).expect("dimension checked"))
        .collect();
    let m = IntMatrix::from_rows(rows).expect("rectangular");
    let smith = linalg::smith_form(&m);
    let r = smith.diagonal.iter().filter(|d| !d.is_zero()).count();
    (r..n).map(|j| smith.right.column(j)).collect()
}

fn rational_inverse(m: &IntMatrix) -> Result<Vec<Vec<BigRational>>> {
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
        cols.push(linalg::solve_rational(m, &e)?);
    }
    Ok((0..n)
        .map(|i| (0..n).map(|j| cols[j][i].clone()).collect())
        .collect())
}

/// `image · inv` when the product is integral.
fn apply_inverse(image: &[Vec<BigInt>], inv: &[Vec<BigRational>]) -> Option<IntMatrix> {
    let n = inv.len();
    let mut rows = vec![vec![BigInt::zero(); n]; n];
    for (i, row) in rows.iter_mut().enumerate() {
        for (k, entry) in row.iter_mut().enumerate() {
            let mut acc = BigRational::zero();
            for (j, col) in image.iter().enumerate() {
                acc += BigRational::from_integer(col[i].clone()) * &inv[j][k];
            }
            if !acc.is_integer() {
                return None;
            }
            *entry = acc.to_integer();
        }
    }
    IntMatrix::from_rows(rows).ok()
}

/// For each target column, the coordinate vectors in the box whose norm under
/// `h` matches.
fn sweep_columns(
    h: &[Vec<BigInt>],
    want: &[Vec<BigInt>],
    bound: u64,
) -> Result<Vec<Vec<Vec<i64>>>> {
    let s = h.len();
    let to_i128 = |x: &BigInt| x.to_i128().ok_or_else(|| Error::InvalidNorm(x.clone()));
    let hq: Vec<Vec<i128>> = h
        .iter()
        .map(|row| row.iter().map(to_i128).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let norms: Vec<i128> = (0..s)
        .map(|j| to_i128(&want[j][j]))
        .collect::<Result<_>>()?;
    let b = bound as i64;
    let mut out = vec![Vec::new(); s];
    let mut y = vec![-b; s];
    loop {
        let mut q = 0i128;
        for i in 0..s {
            let yi = y[i] as i128;
            q += hq[i][i] * yi * yi;
            for j in i + 1..s {
                q += 2 * hq[i][j] * yi * y[j] as i128;
            }
        }
        for (j, target) in norms.iter().enumerate() {
            if q == *target {
                out[j].push(y.clone());
            }
        }
        let mut k = s;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            if y[k] < b {
                y[k] += 1;
                break;
            }
            y[k] = -b;
        }
    }
}

fn assemble(
    columns: &[Vec<Vec<i64>>],
    h: &[Vec<BigInt>],
    want: &[Vec<BigInt>],
    current: &mut Vec<Vec<BigInt>>,
    out: &mut Vec<Vec<Vec<BigInt>>>,
) {
    let j = current.len();
    if j == columns.len() {
        out.push(current.clone());
        return;
    }
    for cand in &columns[j] {
        let y: Vec<BigInt> = cand.iter().map(|&c| BigInt::from(c)).collect();
        let consistent = current.iter().enumerate().all(|(i, x)| {
            let mut acc = BigInt::zero();
            for (p, xp) in x.iter().enumerate() {
                for (q, yq) in y.iter().enumerate() {
                    acc += &h[p][q] * xp * yq;
                }
            }
            acc == want[i][j]
        });
        if consistent {
            current.push(y);
            assemble(columns, h, want, current, out);
            current.pop();
        }
    }
}

/// How an infinite order was certified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InfiniteWitness {
    /// The characteristic polynomial has a root of modulus greater than one.
    OffUnitCircle,
    /// All eigenvalues are roots of unity but no admissible power is the
    /// identity, so the isometry has a nontrivial unipotent part.
    Unipotent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderClass {
    Finite(u64),
    Infinite(InfiniteWitness),
}

impl OrderClass {
    pub fn is_finite(&self) -> bool {
        matches!(self, OrderClass::Finite(_))
    }
}

/// Order of an isometry of `lattice`.
pub fn order_class(lattice: &QuadraticLattice, u: &LatticeIsometry) -> Result<OrderClass> {
    let iso = lattice.isometry(u.matrix().clone())?;
    let m = iso.matrix();
    let n = m.rows();
    for k in admissible_orders(n) {
        let Ok(exp) = u32::try_from(k) else { break };
        if m.pow(exp).is_identity() {
            return Ok(OrderClass::Finite(k));
        }
    }
    let charpoly = characteristic_polynomial(m);
    let witness = if strip_cyclotomic(charpoly, n).len() == 1 {
        InfiniteWitness::Unipotent
    } else {
        InfiniteWitness::OffUnitCircle
    };
    Ok(OrderClass::Infinite(witness))
}

fn totient(m: u64) -> u64 {
    let mut result = m;
    let mut x = m;
    let mut p = 2;
    while p * p <= x {
        if x.is_multiple_of(p) {
            while x.is_multiple_of(p) {
                x /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if x > 1 {
        result -= result / x;
    }
    result
}

/// Orders with a cyclotomic factor of degree `d` for every `m` used, the
/// degrees summing to at most `n`: `lcm` over such multisets, ascending.
pub fn admissible_orders(n: usize) -> Vec<u64> {
    let n = n as u64;
    let mut ms: Vec<(u64, u64)> = Vec::new();
    // φ(m) ≥ sqrt(m/2), so m ≤ 2n² covers every m with φ(m) ≤ n.
    for m in 1..=(2 * n * n).max(2) {
        let phi = totient(m);
        if phi <= n {
            ms.push((m, phi));
        }
    }
    let mut orders = BTreeSet::new();
    fn walk(ms: &[(u64, u64)], from: usize, budget: u64, acc: u64, orders: &mut BTreeSet<u64>) {
        orders.insert(acc);
        for i in from..ms.len() {
            let (m, phi) = ms[i];
            if phi <= budget {
                walk(ms, i + 1, budget - phi, acc.lcm(&m), orders);
            }
        }
    }
    walk(&ms, 0, n, 1, &mut orders);
    orders.into_iter().collect()
}

/// Characteristic polynomial `det(xI − M)`, coefficients from the constant
/// term up. Faddeev–LeVerrier over the rationals.
pub fn characteristic_polynomial(m: &IntMatrix) -> Vec<BigInt> {
    let n = m.rows();
    let rat = |x: &BigInt| BigRational::from_integer(x.clone());
    let a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| rat(m.get(i, j))).collect())
        .collect();
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    let mut mk = vec![vec![BigRational::zero(); n]; n];
    for k in 1..=n {
        // M_k = A·M_{k−1} + c_{n−k+1}·I
        let mut next = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = BigRational::zero();
                for l in 0..n {
                    acc += &a[i][l] * &mk[l][j];
                }
                next[i][j] = acc;
            }
            next[i][i] += &coeffs[n - k + 1];
        }
        let mut trace = BigRational::zero();
        for i in 0..n {
            for l in 0..n {
                trace += &a[i][l] * &next[l][i];
            }
        }
        coeffs[n - k] = -trace / BigRational::from_integer(BigInt::from(k));
        mk = next;
    }
    coeffs.into_iter().map(|c| c.to_integer()).collect()
}

fn poly_divmod(num: &[BigInt], den: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    if rem.len() <= dd {
        return (vec![BigInt::zero()], rem);
    }
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        quot[k] = c.clone();
        for (i, d) in den.iter().enumerate() {
            rem[k + i] -= &c * d;
        }
    }
    rem.truncate(dd.max(1));
    (quot, rem)
}

fn cyclotomic(m: u64) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); m as usize + 1];
    p[0] = -BigInt::one();
    p[m as usize] = BigInt::one();
    for d in 1..m {
        if m.is_multiple_of(d) {
            p = poly_divmod(&p, &cyclotomic(d)).0;
        }
    }
    p
}

/// Divides out every cyclotomic factor of degree at most `n`.
fn strip_cyclotomic(mut p: Vec<BigInt>, n: usize) -> Vec<BigInt> {
    let n = n as u64;
    for m in 1..=(2 * n * n).max(2) {
        if totient(m) > n {
            continue;
        }
        let phi = cyclotomic(m);
        while p.len() >= phi.len() {
            let (q, r) = poly_divmod(&p, &phi);
            if r.iter().any(|c| !c.is_zero()) {
                break;
            }
            p = q;
        }
    }
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    if p.len() == 1 {
        p[0] = p[0].abs();
    }
    p
}
