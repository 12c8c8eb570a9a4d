//! Candidate root norms, local obstructions and "no roots" certificates.
//!
//! A root `r` of norm `k` satisfies `2(r, x) ∈ kℤ` for all `x`, so `k` divides
//! twice the last invariant factor of the Gram matrix. Each candidate is then
//! attacked in three ways: the congruences `2·G·r ≡ 0 (mod k)` cut out a
//! sublattice on which the form has a forced content; the restricted form must
//! represent `k`, which can fail modulo a prime power; and a bounded search
//! looks for an actual root.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::enumerate::for_each_shell_point;
use crate::error::{Error, Result};
use crate::lattice::{QuadraticLattice, Root, RootCheck};
use crate::linalg::{self, IntMatrix, SymmetricIntMatrix};

/// Residue sweeps are used whenever `modulus^dim` is at most this.
const SWEEP_LIMIT: u64 = 1 << 12;

pub const DEFAULT_SEARCH_RADIUS: u64 = 10_000;

/// An integral quadratic polynomial `q(x) = Σ_{i≤j} c_ij x_i x_j`.
///
/// Unlike a Gram matrix this allows odd cross coefficients, which arise when
/// a restricted form is divided by its content.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntegralForm {
    /// `coeffs[i][j]` for `i ≤ j`; entries below the diagonal are zero.
    coeffs: Vec<Vec<BigInt>>,
}

impl IntegralForm {
    /// Builds a form from a full square array, of which only the upper
    /// triangle (diagonal included) is read.
    pub fn from_upper(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut coeffs = vec![vec![BigInt::zero(); n]; n];
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSquare {
                    rows: n,
                    cols: row.len(),
                });
            }
            for (j, c) in row.into_iter().enumerate().skip(i) {
                coeffs[i][j] = c;
            }
        }
        Ok(Self { coeffs })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::from_upper(rows.iter().map(|r| linalg::to_bigint_vec(r)).collect())
    }

    /// The form `x ↦ xᵀ·G·x`.
    pub fn from_gram(gram: &SymmetricIntMatrix) -> Self {
        let n = gram.dim();
        let mut coeffs = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            coeffs[i][i] = gram.get(i, i).clone();
            for j in i + 1..n {
                coeffs[i][j] = gram.get(i, j) * 2;
            }
        }
        Self { coeffs }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient of `x_i x_j`, `i ≤ j`.
    pub fn coefficient(&self, i: usize, j: usize) -> &BigInt {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        &self.coeffs[i][j]
    }

    pub fn coefficients(&self) -> &[Vec<BigInt>] {
        &self.coeffs
    }

    /// Symmetric matrix `M` with `2·q(x) = xᵀ·M·x`.
    pub fn doubled_gram(&self) -> SymmetricIntMatrix {
        let n = self.dim();
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, &self.coeffs[i][i] * 2);
            for j in i + 1..n {
                m.set(i, j, self.coeffs[i][j].clone());
                m.set(j, i, self.coeffs[i][j].clone());
            }
        }
        SymmetricIntMatrix::new(m).expect("symmetric by construction")
    }

    pub fn evaluate(&self, x: &[BigInt]) -> BigInt {
        let mut total = BigInt::zero();
        for i in 0..self.dim() {
            if x[i].is_zero() {
                continue;
            }
            for j in i..self.dim() {
                if !self.coeffs[i][j].is_zero() {
                    total += &self.coeffs[i][j] * &x[i] * &x[j];
                }
            }
        }
        total
    }

    /// gcd of all coefficients.
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .flatten()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// `m ↦ q(B·m)`.
    pub fn substitute(&self, basis: &IntMatrix) -> Self {
        let g = self.doubled_gram().congruence(basis);
        let n = g.dim();
        let mut coeffs = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            coeffs[i][i] = g.get(i, i) / 2;
            for j in i + 1..n {
                coeffs[i][j] = g.get(i, j).clone();
            }
        }
        Self { coeffs }
    }

    /// Divides every coefficient by `c`; `None` unless `c` divides the content.
    pub fn divide(&self, c: &BigInt) -> Option<Self> {
        if c.is_zero() || !self.content().is_multiple_of(c) {
            return None;
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|row| row.iter().map(|x| x / c).collect())
            .collect();
        Some(Self { coeffs })
    }
}

impl fmt::Display for IntegralForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for i in 0..self.dim() {
            for j in i..self.dim() {
                let c = &self.coeffs[i][j];
                if c.is_zero() {
                    continue;
                }
                let sign = if c.is_negative() { "-" } else { "+" };
                if first {
                    if c.is_negative() {
                        write!(f, "-")?;
                    }
                } else {
                    write!(f, " {sign} ")?;
                }
                first = false;
                let a = c.abs();
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                if i == j {
                    write!(f, "x{i}^2")?;
                } else {
                    write!(f, "x{i}*x{j}")?;
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocalSolvability {
    /// `q(x) ≡ target` has no solution modulo the modulus.
    Obstructed,
    Unobstructed,
}

impl LocalSolvability {
    pub fn is_obstructed(self) -> bool {
        self == LocalSolvability::Obstructed
    }
}

/// Decides whether `q(x) ≡ target (mod modulus)` is unsolvable.
///
/// Small cases are decided by sweeping all residues; prime powers with too
/// many residues go through a Jordan decomposition over the `p`-adic integers.
/// Both routes are exact.
pub fn local_obstruction(q: &IntegralForm, target: &BigInt, modulus: &BigInt) -> LocalSolvability {
    assert!(modulus > &BigInt::one(), "modulus must be at least 2");
    if sweep_is_small(modulus, q.dim()) {
        return sweep(q, target, modulus);
    }
    for (p, e) in factorize(modulus) {
        if !prime_power_solvable(q, target, &p, e) {
            return LocalSolvability::Obstructed;
        }
    }
    LocalSolvability::Unobstructed
}

/// Exhaustive sweep over `(ℤ/modulus)^n`; exponential in the dimension.
pub fn sweep(q: &IntegralForm, target: &BigInt, modulus: &BigInt) -> LocalSolvability {
    let n = q.dim();
    let t = target.mod_floor(modulus);
    let mut x = vec![BigInt::zero(); n];
    loop {
        if q.evaluate(&x).mod_floor(modulus) == t {
            return LocalSolvability::Unobstructed;
        }
        let mut i = 0;
        loop {
            if i == n {
                return LocalSolvability::Obstructed;
            }
            x[i] += 1;
            if &x[i] < modulus {
                break;
            }
            x[i] = BigInt::zero();
            i += 1;
        }
    }
}

fn sweep_is_small(modulus: &BigInt, dim: usize) -> bool {
    let Some(m) = modulus.to_u64() else {
        return false;
    };
    let mut total: u64 = 1;
    for _ in 0..dim {
        total = match total.checked_mul(m) {
            Some(t) if t <= SWEEP_LIMIT => t,
            _ => return false,
        };
    }
    true
}

fn prime_power_solvable(q: &IntegralForm, target: &BigInt, p: &BigInt, e: u32) -> bool {
    let modulus = p.pow(e);
    if sweep_is_small(&modulus, q.dim()) {
        return !sweep(q, target, &modulus).is_obstructed();
    }
    PadicSolver::new(q, p, e).solvable(target)
}

/// Trial-division factorisation into `(prime, exponent)` pairs.
pub fn factorize(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        let mut e = 0;
        while n.is_multiple_of(&p) {
            n /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += if p == BigInt::from(2) { 1 } else { 2 };
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

/// All positive divisors in ascending order.
pub fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = vec![BigInt::one()];
    for (p, e) in factorize(n) {
        let current = out.clone();
        let mut pk = BigInt::one();
        for _ in 0..e {
            pk *= &p;
            out.extend(current.iter().map(|d| d * &pk));
        }
    }
    out.sort();
    out
}

fn valuation(n: &BigInt, p: &BigInt) -> u32 {
    if n.is_zero() {
        return u32::MAX;
    }
    let mut n = n.clone();
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

fn rational_valuation(x: &BigRational, p: &BigInt) -> i64 {
    if x.is_zero() {
        return i64::MAX;
    }
    valuation(x.numer(), p) as i64 - valuation(x.denom(), p) as i64
}

/// Residue of a `p`-integral rational modulo `m` (a power of `p`).
fn rational_residue(x: &BigRational, m: &BigInt) -> BigInt {
    let den = x.denom().mod_floor(m);
    let inv = mod_inverse(&den, m).expect("denominator is a unit");
    (x.numer() * inv).mod_floor(m)
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.extended_gcd(m);
    if !g.gcd.is_one() {
        return None;
    }
    Some(g.x.mod_floor(m))
}

/// Euler's criterion for an odd prime; `a` must be a unit mod `p`.
fn is_square_mod(a: &BigInt, p: &BigInt) -> bool {
    let exp: BigInt = (p - 1u32) / 2u32;
    a.mod_floor(p).modpow(&exp, p).is_one()
}

/// One Jordan component of `2q` over `ℤ_p`: `p^scale·u·y²`, or for `p = 2`
/// also `2^scale·(a·y² + 2b·yz + c·z²)` with `b` odd and `a`, `c` even.
#[derive(Clone, Debug)]
enum Jordan {
    Single {
        scale: u32,
        unit: BigInt,
    },
    Pair {
        scale: u32,
        a: BigInt,
        b: BigInt,
        c: BigInt,
    },
}

impl Jordan {
    fn scale(&self) -> u32 {
        match self {
            Jordan::Single { scale, .. } | Jordan::Pair { scale, .. } => *scale,
        }
    }

    fn with_scale(&self, s: u32) -> Jordan {
        let mut out = self.clone();
        match &mut out {
            Jordan::Single { scale, .. } | Jordan::Pair { scale, .. } => *scale = s,
        }
        out
    }

    fn arity(&self) -> usize {
        match self {
            Jordan::Single { .. } => 1,
            Jordan::Pair { .. } => 2,
        }
    }

    fn value(&self, y: &[u64], m: &BigInt) -> BigInt {
        let pow = BigInt::from(2).pow(self.scale());
        let v = match self {
            Jordan::Single { unit, .. } => unit * BigInt::from(y[0] * y[0]),
            Jordan::Pair { a, b, c, .. } => {
                let (y0, y1) = (BigInt::from(y[0]), BigInt::from(y[1]));
                a * &y0 * &y0 + b * &y0 * &y1 * 2 + c * &y1 * &y1
            }
        };
        (v * pow).mod_floor(m)
    }
}

/// Solvability of `2q(x) ≡ 2t (mod 2p^e)` (equivalently `q ≡ t mod p^e`) via a
/// Jordan splitting of the doubled Gram matrix.
struct PadicSolver {
    p: BigInt,
    /// Exponent of the doubled equation: `e` for odd `p`, `e + 1` for `p = 2`.
    depth: u32,
    blocks: Vec<Jordan>,
}

impl PadicSolver {
    fn new(q: &IntegralForm, p: &BigInt, e: u32) -> Self {
        let two = p == &BigInt::from(2);
        let depth = if two { e + 1 } else { e };
        let modulus = p.pow(depth);
        let m = q.doubled_gram();
        let n = m.dim();
        let mut a: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| BigRational::from_integer(m.get(i, j).clone()))
                    .collect()
            })
            .collect();
        let mut live: Vec<usize> = (0..n).collect();
        let mut blocks = Vec::new();
        let unit_of = |x: &BigRational, v: i64| -> BigInt {
            let scaled = x / BigRational::from_integer(p.pow(v as u32));
            rational_residue(&scaled, &modulus)
        };
        while !live.is_empty() {
            let mut best: Option<(i64, usize, usize)> = None;
            for (ii, &i) in live.iter().enumerate() {
                for &j in &live[ii..] {
                    let v = rational_valuation(&a[i][j], p);
                    if v == i64::MAX {
                        continue;
                    }
                    // prefer diagonal entries on ties
                    let better = match best {
                        None => true,
                        Some((bv, bi, bj)) => v < bv || (v == bv && i == j && bi != bj),
                    };
                    if better {
                        best = Some((v, i, j));
                    }
                }
            }
            let Some((v, i, j)) = best else {
                break;
            };
            if i == j || !two {
                let pivot = if i == j {
                    i
                } else {
                    // x_i ← x_i + x_j makes the diagonal entry attain the valuation
                    for k in 0..n {
                        let t = a[j][k].clone();
                        a[i][k] += t;
                    }
                    for k in 0..n {
                        let t = a[k][j].clone();
                        a[k][i] += t;
                    }
                    i
                };
                let d = a[pivot][pivot].clone();
                debug_assert_eq!(rational_valuation(&d, p), v);
                for &k in &live {
                    if k == pivot || a[k][pivot].is_zero() {
                        continue;
                    }
                    let f = &a[k][pivot] / &d;
                    for l in 0..n {
                        let t = &f * &a[pivot][l];
                        a[k][l] -= t;
                    }
                    for l in 0..n {
                        let t = &f * &a[l][pivot];
                        a[l][k] -= t;
                    }
                }
                blocks.push(Jordan::Single {
                    scale: v as u32,
                    unit: unit_of(&d, v),
                });
                live.retain(|&k| k != pivot);
            } else {
                let (x, y, z) = (a[i][i].clone(), a[i][j].clone(), a[j][j].clone());
                let det = &x * &z - &y * &y;
                for &k in &live {
                    if k == i || k == j {
                        continue;
                    }
                    let (bi, bj) = (a[k][i].clone(), a[k][j].clone());
                    if bi.is_zero() && bj.is_zero() {
                        continue;
                    }
                    let alpha = (&z * &bi - &y * &bj) / &det;
                    let beta = (&x * &bj - &y * &bi) / &det;
                    for l in 0..n {
                        let t = &alpha * &a[i][l] + &beta * &a[j][l];
                        a[k][l] -= t;
                    }
                    for l in 0..n {
                        let t = &alpha * &a[l][i] + &beta * &a[l][j];
                        a[l][k] -= t;
                    }
                }
                blocks.push(Jordan::Pair {
                    scale: v as u32,
                    a: unit_of(&x, v),
                    b: unit_of(&y, v),
                    c: unit_of(&z, v),
                });
                live.retain(|&k| k != i && k != j);
            }
        }
        Self {
            p: p.clone(),
            depth,
            blocks,
        }
    }

    fn solvable(&self, target: &BigInt) -> bool {
        let modulus: BigInt = self.p.pow(self.depth);
        let t = (target * BigInt::from(2)).mod_floor(&modulus);
        if self.p == BigInt::from(2) {
            solve_dyadic(self.blocks.clone(), t, self.depth)
        } else {
            solve_odd(&self.p, self.blocks.clone(), t, self.depth)
        }
    }
}

fn drop_invisible(blocks: Vec<Jordan>, depth: u32) -> Vec<Jordan> {
    blocks.into_iter().filter(|b| b.scale() < depth).collect()
}

/// `Σ u_i p^{s_i} y_i² ≡ t (mod p^depth)` for odd `p`.
fn solve_odd(p: &BigInt, blocks: Vec<Jordan>, t: BigInt, depth: u32) -> bool {
    if depth == 0 || t.is_multiple_of(&p.pow(depth)) {
        return true;
    }
    let blocks = drop_invisible(blocks, depth);
    let units: Vec<&BigInt> = blocks
        .iter()
        .filter_map(|b| match b {
            Jordan::Single { scale: 0, unit } => Some(unit),
            _ => None,
        })
        .collect();
    let t_mod_p = t.mod_floor(p);
    // some unit-scale variable is nonzero mod p; Hensel lifts a solution mod p
    let lifted = match units.len() {
        0 => false,
        1 => {
            let inv = mod_inverse(&units[0].mod_floor(p), p).expect("unit");
            !t_mod_p.is_zero() && is_square_mod(&(&t_mod_p * inv), p)
        }
        2 => !t_mod_p.is_zero() || is_square_mod(&(-(units[0] * units[1])), p),
        _ => true,
    };
    if lifted {
        return true;
    }
    if !t_mod_p.is_zero() {
        return false;
    }
    // all unit-scale variables divisible by p: rescale and divide by p
    let next = blocks
        .into_iter()
        .map(|b| {
            let s = b.scale();
            if s == 0 {
                b.with_scale(1)
            } else {
                b.with_scale(s - 1)
            }
        })
        .collect();
    solve_odd(p, next, t / p, depth - 1)
}

/// The same equation at `p = 2`, where Hensel lifting needs the equation mod 8
/// (odd square) or mod 4 (binary block with odd middle coefficient).
fn solve_dyadic(blocks: Vec<Jordan>, t: BigInt, depth: u32) -> bool {
    let two = BigInt::from(2);
    if depth == 0 || t.is_multiple_of(&two.pow(depth)) {
        return true;
    }
    let blocks = drop_invisible(blocks, depth);
    if blocks.iter().any(|b| b.scale() == 0) && dyadic_lift_exists(&blocks, &t, depth) {
        return true;
    }
    if t.is_odd() {
        return false;
    }
    let next = blocks
        .into_iter()
        .map(|b| {
            let s = b.scale();
            if s == 0 {
                b.with_scale(1)
            } else {
                b.with_scale(s - 1)
            }
        })
        .collect();
    solve_dyadic(next, t / 2, depth - 1)
}

/// Searches residues mod 8 for an assignment with an "active" unit-scale
/// variable whose local condition is met.
fn dyadic_lift_exists(blocks: &[Jordan], t: &BigInt, depth: u32) -> bool {
    let visible: Vec<&Jordan> = blocks.iter().filter(|b| b.scale() < 3).collect();
    let arity: usize = visible.iter().map(|b| b.arity()).sum();
    let mod8 = BigInt::from(8);
    let m_single = BigInt::from(2).pow(depth.min(3));
    let m_pair = BigInt::from(2).pow(depth.min(2));
    let mut y = vec![0u64; arity];
    loop {
        let mut total = BigInt::zero();
        let mut single_active = false;
        let mut pair_active = false;
        let mut off = 0;
        for b in &visible {
            let ys = &y[off..off + b.arity()];
            total += b.value(ys, &mod8);
            if b.scale() == 0 {
                match b {
                    Jordan::Single { .. } => single_active |= ys[0] % 2 == 1,
                    Jordan::Pair { .. } => pair_active |= ys[0] % 2 == 1 || ys[1] % 2 == 1,
                }
            }
            off += b.arity();
        }
        let diff = &total - t;
        if single_active && diff.is_multiple_of(&m_single) {
            return true;
        }
        if pair_active && diff.is_multiple_of(&m_pair) {
            return true;
        }
        let mut i = 0;
        loop {
            if i == arity {
                return false;
            }
            y[i] += 1;
            if y[i] < 8 {
                break;
            }
            y[i] = 0;
            i += 1;
        }
    }
}

/// Prime-power moduli `p^(2·ord_p(2·det·k) + 2)` for every prime `p | 2·det·k`.
pub fn obstruction_moduli(det: &BigInt, k: &BigInt) -> Vec<(BigInt, u32)> {
    let n: BigInt = det * k * 2;
    factorize(&n)
        .into_iter()
        .map(|(p, e)| (p, 2 * e + 2))
        .collect()
}

/// The least modulus among `p, p², …, p^max` (over the listed primes) at
/// which `q ≡ target` is obstructed.
fn find_obstruction(q: &IntegralForm, target: &BigInt, moduli: &[(BigInt, u32)]) -> Option<BigInt> {
    for (p, max) in moduli {
        if prime_power_solvable(q, target, p, *max) {
            continue;
        }
        for e in 1..=*max {
            if !prime_power_solvable(q, target, p, e) {
                return Some(p.pow(e));
            }
        }
    }
    None
}

/// Twice the last invariant factor of the Gram matrix.
pub fn norm_bound(lattice: &QuadraticLattice) -> BigInt {
    let factors =
        linalg::invariant_factors(lattice.gram()).expect("Lorentzian lattices are nonsingular");
    factors.last().expect("non-empty") * 2
}

/// Divisors of [`norm_bound`] that the form represents modulo every
/// obstruction modulus.
pub fn root_norm_candidates(lattice: &QuadraticLattice) -> Vec<BigInt> {
    let f = IntegralForm::from_gram(lattice.gram());
    let det = lattice_det(lattice);
    divisors(&norm_bound(lattice))
        .into_iter()
        .filter(|k| find_obstruction(&f, k, &obstruction_moduli(&det, k)).is_none())
        .collect()
}

fn lattice_det(lattice: &QuadraticLattice) -> BigInt {
    lattice.gram().as_matrix().determinant().expect("square")
}

/// Vectors satisfying the crystallographic congruences for a fixed norm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrystallographicSublattice {
    pub norm: BigInt,
    /// Basis vectors as columns, in Hermite normal form.
    pub basis: IntMatrix,
    /// `[ℤ^n : sublattice] = |det basis|`.
    pub index: BigInt,
    /// `f` restricted to the sublattice, in the basis coordinates.
    pub restricted: IntegralForm,
    /// gcd of the coefficients of `restricted`.
    pub content: BigInt,
    /// `restricted / content`.
    pub reduced: IntegralForm,
}

impl CrystallographicSublattice {
    /// Whether the content divides the norm; otherwise no vector of the
    /// sublattice has norm `k`.
    pub fn content_divides_norm(&self) -> bool {
        self.norm.is_multiple_of(&self.content)
    }

    /// Value the reduced form must take: `k / content`.
    pub fn reduced_target(&self) -> Option<BigInt> {
        self.content_divides_norm()
            .then(|| &self.norm / &self.content)
    }

    /// `restricted / k`, under which roots of norm `k` correspond to
    /// representations of 1. Integral only when `k` divides the content.
    pub fn unit_target_form(&self) -> Result<IntegralForm> {
        self.restricted
            .divide(&self.norm)
            .ok_or_else(|| Error::NonIntegralScaling {
                norm: self.norm.clone(),
                content: self.content.clone(),
            })
    }

    /// Lattice vector with the given sublattice coordinates.
    pub fn lift(&self, m: &[BigInt]) -> Vec<BigInt> {
        self.basis.mul_vec(m)
    }
}

/// Solves `2·G·r ≡ 0 (mod k)`.
///
/// With `U·(2G)·V = D` in Smith form the condition reads `d_i s_i ≡ 0 (mod k)`
/// for `r = V·s`, so the columns of `V·diag(k / gcd(k, d_i))` span the solutions.
pub fn crystallographic_sublattice(
    lattice: &QuadraticLattice,
    k: &BigInt,
) -> Result<CrystallographicSublattice> {
    if !k.is_positive() {
        return Err(Error::InvalidNorm(k.clone()));
    }
    let n = lattice.rank();
    let mut twice = lattice.gram().as_matrix().clone();
    for i in 0..n {
        for j in 0..n {
            let x = twice.get(i, j) * 2;
            twice.set(i, j, x);
        }
    }
    let snf = linalg::smith_form(&twice);
    let mut basis = snf.right.clone();
    for (j, d) in snf.diagonal.iter().enumerate() {
        let scale = k / k.gcd(d);
        for i in 0..n {
            let x = basis.get(i, j) * &scale;
            basis.set(i, j, x);
        }
    }
    let basis = linalg::hermite_basis(&basis)?;
    let index = basis.determinant()?.abs();
    let restricted = IntegralForm::from_gram(lattice.gram()).substitute(&basis);
    let content = restricted.content();
    let reduced = restricted.divide(&content).expect("content divides itself");
    Ok(CrystallographicSublattice {
        norm: k.clone(),
        basis,
        index,
        restricted,
        content,
        reduced,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormOutcome {
    /// The content of the restricted form does not divide `k`.
    EliminatedByDivisibility {
        content: BigInt,
    },
    /// `f(x) ≡ k` has no solution modulo `modulus`.
    EliminatedLocally {
        modulus: BigInt,
        target: BigInt,
    },
    /// The reduced form on the crystallographic sublattice misses `target`
    /// modulo `modulus`.
    EliminatedByReduction {
        basis: IntMatrix,
        reduced: IntegralForm,
        target: BigInt,
        modulus: BigInt,
    },
    RootFound(Root),
    /// No obstruction and no root within the search radius.
    Inconclusive {
        basis: IntMatrix,
        reduced: IntegralForm,
        target: BigInt,
    },
}

impl NormOutcome {
    pub fn kind(&self) -> &'static str {
        match self {
            NormOutcome::EliminatedByDivisibility { .. } => "eliminated-by-divisibility",
            NormOutcome::EliminatedLocally { .. } => "eliminated-locally",
            NormOutcome::EliminatedByReduction { .. } => "eliminated-by-reduction",
            NormOutcome::RootFound(_) => "root-found",
            NormOutcome::Inconclusive { .. } => "inconclusive",
        }
    }

    pub fn is_eliminated(&self) -> bool {
        matches!(
            self,
            NormOutcome::EliminatedByDivisibility { .. }
                | NormOutcome::EliminatedLocally { .. }
                | NormOutcome::EliminatedByReduction { .. }
        )
    }
}

#[derive(Clone, Debug)]
pub struct SieveConfig {
    /// Sup-norm bound on all but one sublattice coordinate; the remaining one
    /// is solved for exactly.
    pub search_radius: u64,
}

impl Default for SieveConfig {
    fn default() -> Self {
        Self {
            search_radius: DEFAULT_SEARCH_RADIUS,
        }
    }
}

/// Per-norm outcomes for every divisor of twice the last invariant factor.
#[derive(Clone, Debug)]
pub struct NoRootsCertificate {
    pub norm_bound: BigInt,
    pub entries: BTreeMap<BigInt, NormOutcome>,
    pub search_radius: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootsVerdict {
    NoRoots,
    RootFound(Root),
    Inconclusive(Vec<BigInt>),
}

impl NoRootsCertificate {
    pub fn verdict(&self) -> RootsVerdict {
        if let Some(root) = self.entries.values().find_map(|o| match o {
            NormOutcome::RootFound(r) => Some(r.clone()),
            _ => None,
        }) {
            return RootsVerdict::RootFound(root);
        }
        let open: Vec<BigInt> = self
            .entries
            .iter()
            .filter(|(_, o)| !o.is_eliminated())
            .map(|(k, _)| k.clone())
            .collect();
        if open.is_empty() {
            RootsVerdict::NoRoots
        } else {
            RootsVerdict::Inconclusive(open)
        }
    }

    /// Every divisor of the bound has exactly one entry.
    pub fn is_complete(&self) -> bool {
        let ds = divisors(&self.norm_bound);
        ds.len() == self.entries.len() && ds.iter().all(|d| self.entries.contains_key(d))
    }
}

/// Runs every candidate norm through the sieve.
pub fn certify_no_roots(lattice: &QuadraticLattice, config: &SieveConfig) -> NoRootsCertificate {
    let f = IntegralForm::from_gram(lattice.gram());
    let det = lattice_det(lattice);
    let bound = norm_bound(lattice);
    let mut entries = BTreeMap::new();
    for k in divisors(&bound) {
        let moduli = obstruction_moduli(&det, &k);
        let outcome = if let Some(modulus) = find_obstruction(&f, &k, &moduli) {
            NormOutcome::EliminatedLocally {
                modulus,
                target: k.clone(),
            }
        } else {
            reduce_norm(lattice, &k, &moduli, config)
        };
        entries.insert(k, outcome);
    }
    NoRootsCertificate {
        norm_bound: bound,
        entries,
        search_radius: config.search_radius,
    }
}

fn reduce_norm(
    lattice: &QuadraticLattice,
    k: &BigInt,
    moduli: &[(BigInt, u32)],
    config: &SieveConfig,
) -> NormOutcome {
    let sub = crystallographic_sublattice(lattice, k).expect("k is positive");
    let Some(target) = sub.reduced_target() else {
        return NormOutcome::EliminatedByDivisibility {
            content: sub.content,
        };
    };
    if let Some(modulus) = find_obstruction(&sub.reduced, &target, moduli) {
        return NormOutcome::EliminatedByReduction {
            basis: sub.basis,
            reduced: sub.reduced,
            target,
            modulus,
        };
    }
    if let Some(root) = search_root(lattice, &sub, &target, config.search_radius) {
        return NormOutcome::RootFound(root);
    }
    NormOutcome::Inconclusive {
        basis: sub.basis,
        reduced: sub.reduced,
        target,
    }
}

/// Looks for `m` with `q(m) = target` whose lift is a root. The free
/// coordinates run over sup-norm shells in lexicographic order; one
/// coordinate with nonzero square coefficient is solved for.
fn search_root(
    lattice: &QuadraticLattice,
    sub: &CrystallographicSublattice,
    target: &BigInt,
    radius: u64,
) -> Option<Root> {
    let q = &sub.reduced;
    let n = q.dim();
    let solved = (0..n)
        .rev()
        .find(|&i| !q.coefficient(i, i).is_zero())
        .unwrap_or(n - 1);
    let free: Vec<usize> = (0..n).filter(|&i| i != solved).collect();
    let a = q.coefficient(solved, solved).clone();
    let mut m = vec![BigInt::zero(); n];
    let mut shell_point = vec![0i64; free.len()];
    for s in 0..=radius as i64 {
        let mut found = None;
        for_each_shell_point(&mut shell_point, 0, s, false, &mut |pt| {
            for (slot, &i) in free.iter().enumerate() {
                m[i] = BigInt::from(pt[slot]);
            }
            m[solved] = BigInt::zero();
            // q = a·x² + b·x + c in the solved coordinate x
            let c = q.evaluate(&m) - target;
            let mut b = BigInt::zero();
            for &i in &free {
                b += q.coefficient(i, solved) * &m[i];
            }
            for x in integer_roots(&a, &b, &c) {
                m[solved] = x;
                let r = sub.lift(&m);
                if r.iter().all(Zero::is_zero) {
                    continue;
                }
                if let Ok(RootCheck::Accepted(root)) = lattice.is_root(&r) {
                    found = Some(root);
                    return true;
                }
            }
            false
        });
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Integer solutions of `a·x² + b·x + c = 0`, ascending.
fn integer_roots(a: &BigInt, b: &BigInt, c: &BigInt) -> Vec<BigInt> {
    if a.is_zero() {
        if b.is_zero() {
            return Vec::new();
        }
        let (x, r) = (-c).div_rem(b);
        return if r.is_zero() { vec![x] } else { Vec::new() };
    }
    let disc: BigInt = b * b - a * c * 4;
    if disc.is_negative() {
        return Vec::new();
    }
    let root = disc.sqrt();
    if &root * &root != disc {
        return Vec::new();
    }
    let den: BigInt = a * 2;
    let mut out: Vec<BigInt> = [-b - &root, -b + &root]
        .into_iter()
        .filter(|num| num.is_multiple_of(&den))
        .map(|num| num / &den)
        .collect();
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn reduced_q49() -> IntegralForm {
        // 49 m2² + 14 m1 m3 − 28 m2 m3 + 6 m3²
        IntegralForm::from_i64(&[&[0, 0, 14], &[0, 49, -28], &[0, 0, 6]]).unwrap()
    }

    #[test]
    fn mod_seven_obstruction() {
        let q = reduced_q49();
        assert!(local_obstruction(&q, &big(1), &big(7)).is_obstructed());
        let values: std::collections::BTreeSet<i64> =
            (0..7).map(|m: i64| (6 * m * m).rem_euclid(7)).collect();
        assert_eq!(values.into_iter().collect::<Vec<_>>(), vec![0, 3, 5, 6]);
    }

    #[test]
    fn trivial_obstructions() {
        let sum = IntegralForm::from_i64(&[&[1, 0], &[0, 1]]).unwrap();
        assert!(local_obstruction(&sum, &big(3), &big(4)).is_obstructed());
        let sq = IntegralForm::from_i64(&[&[1]]).unwrap();
        assert!(!local_obstruction(&sq, &big(1), &big(3)).is_obstructed());
    }

    #[test]
    fn padic_route_matches_sweep() {
        let forms = [
            reduced_q49(),
            IntegralForm::from_i64(&[&[1, 0], &[0, 1]]).unwrap(),
            IntegralForm::from_i64(&[&[2, 1], &[0, 6]]).unwrap(),
            IntegralForm::from_i64(&[&[0, 1], &[0, 0]]).unwrap(),
            IntegralForm::from_i64(&[&[4, 4, 0], &[0, 12, 2], &[0, 0, 8]]).unwrap(),
            IntegralForm::from_i64(&[&[3, 7, 49], &[0, 0, 0], &[0, 0, 49]]).unwrap(),
        ];
        for q in &forms {
            for (p, e) in [(2, 1), (2, 3), (2, 5), (3, 2), (3, 4), (7, 2), (5, 2)] {
                let p = big(p);
                let m = p.pow(e);
                for t in 0..20 {
                    let t = big(t);
                    let expected = sweep(q, &t, &m);
                    let got = PadicSolver::new(q, &p, e).solvable(&t);
                    assert_eq!(got, !expected.is_obstructed(), "{q} ≡ {t} mod {m}");
                }
            }
        }
    }

    #[test]
    fn divisor_and_factor_helpers() {
        assert_eq!(
            divisors(&big(4802)),
            [1, 2, 7, 14, 49, 98, 343, 686, 2401, 4802]
                .map(big)
                .to_vec()
        );
        assert_eq!(factorize(&big(4802)), vec![(big(2), 1), (big(7), 4)]);
    }

    #[test]
    fn candidate_norms() {
        assert_eq!(
            root_norm_candidates(&catalog::rootless_lattice()),
            [49, 98, 2401, 4802].map(big).to_vec()
        );
        let plane = root_norm_candidates(&catalog::unimodular_plane());
        assert!(plane.iter().all(|k| k == &big(1) || k == &big(2)));
        let thin = root_norm_candidates(&catalog::thin_lattice());
        assert!(thin.contains(&big(49)));
        assert!(thin.iter().all(|k| big(98).is_multiple_of(k)));
    }

    #[test]
    fn sublattice_for_unit_norm_is_everything() {
        let l = catalog::thin_lattice();
        let sub = crystallographic_sublattice(&l, &big(1)).unwrap();
        assert!(sub.basis.is_identity());
        assert_eq!(sub.restricted, IntegralForm::from_gram(l.gram()));
    }

    #[test]
    fn rootless_sublattice_matches_parametrisation() {
        let l = catalog::rootless_lattice();
        let sub = crystallographic_sublattice(&l, &big(49)).unwrap();
        assert_eq!(sub.index, big(49));
        assert_eq!(sub.content, big(49));
        assert_eq!(sub.unit_target_form().unwrap(), sub.reduced);
        // k = (m1, 7 m2 − 3 m3, 7 m3) spans the same lattice
        let p = IntMatrix::from_i64(&[&[1, 0, 0], &[0, 7, -3], &[0, 0, 7]]);
        assert_eq!(linalg::hermite_basis(&p).unwrap(), sub.basis);
        assert_eq!(
            IntegralForm::from_gram(l.gram())
                .substitute(&p)
                .divide(&big(49))
                .unwrap(),
            reduced_q49()
        );
    }

    #[test]
    fn non_integral_scaling_reported() {
        let l = catalog::rootless_lattice();
        let sub = crystallographic_sublattice(&l, &big(98)).unwrap();
        assert_eq!(sub.reduced_target(), Some(big(2)));
        assert!(matches!(
            sub.unit_target_form(),
            Err(Error::NonIntegralScaling { .. })
        ));
    }

    #[test]
    fn rootless_certificate() {
        let cert = certify_no_roots(&catalog::rootless_lattice(), &SieveConfig::default());
        assert!(cert.is_complete());
        assert_eq!(cert.verdict(), RootsVerdict::NoRoots);
        match &cert.entries[&big(49)] {
            NormOutcome::EliminatedByReduction {
                target, modulus, ..
            } => {
                assert_eq!(target, &big(1));
                assert_eq!(modulus, &big(7));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn roots_found_where_they_exist() {
        let cfg = SieveConfig::default();
        match certify_no_roots(&catalog::unimodular_plane(), &cfg).verdict() {
            RootsVerdict::RootFound(r) => assert_eq!(r.norm(), &big(1)),
            other => panic!("unexpected {other:?}"),
        }
        let l = catalog::thin_lattice();
        match certify_no_roots(&l, &cfg).verdict() {
            RootsVerdict::RootFound(r) => assert!(l.is_root(r.vector()).unwrap().is_accepted()),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn form_display() {
        assert_eq!(
            reduced_q49().to_string(),
            "14*x0*x2 + 49*x1^2 - 28*x1*x2 + 6*x2^2"
        );
    }
}
