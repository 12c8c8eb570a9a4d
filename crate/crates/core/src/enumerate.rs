//! Exhaustive enumeration of the level sets `{e : (e,e) = k, (e,v0) = -n}`.
//!
//! For a timelike basepoint `v0` the hyperplane `(e, v0) = -n` is a translate
//! of `v0^⊥`, on which the form is positive definite, so each level set is
//! finite. The hyperplane is parametrised as `e = s·p + B·t` with `s = n/h`,
//! where `h` generates the ideal of values `(ℤ^{d+1}, v0)`, `p` satisfies
//! `(p, v0) = -h` and the columns of `B` span `v0^⊥ ∩ ℤ^{d+1}`. The form in
//! `t` is enumerated Fincke–Pohst style: an exact rational LDLᵀ bounds every
//! coordinate but the first, and the first is solved as an integer quadratic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::QuadraticLattice;
use crate::linalg::{self, IntMatrix, SymmetricIntMatrix};

#[derive(Clone, Debug)]
pub struct LevelEnumerator {
    basepoint: Vec<BigInt>,
    basepoint_norm: BigInt,
    /// Generator of the value ideal of `x ↦ (x, v0)`.
    step: BigInt,
    direction: Vec<BigInt>,
    kernel: IntMatrix,
    /// `Bᵀ·G·B`, positive definite.
    form: SymmetricIntMatrix,
    /// `Bᵀ·G·p`.
    cross: Vec<BigInt>,
    direction_norm: BigInt,
    /// Minimiser of the form on the level `s = 1`.
    center_unit: Vec<BigRational>,
    /// Minimum value of the form on the level `s = 1`; equals `h²/(v0,v0)`.
    min_unit: BigRational,
    ldl_lower: Vec<Vec<BigRational>>,
    ldl_diag: Vec<BigRational>,
}

impl LevelEnumerator {
    pub fn new(lattice: &QuadraticLattice, basepoint: &[BigInt]) -> Result<Self> {
        let v0_norm = lattice.norm(basepoint)?;
        if !v0_norm.is_negative() {
            return Err(Error::InvalidBasepoint(v0_norm));
        }
        let n = lattice.rank();
        let g = lattice.dual_coordinates(basepoint)?;
        let row = IntMatrix::from_rows(vec![g])?;
        let snf = linalg::smith_form(&row);
        // row·V = U⁻¹·(h, 0, …, 0) with U = ±1
        let h = snf.diagonal[0].clone();
        let unit = snf.left.get(0, 0).clone();
        let v = &snf.right;
        let direction: Vec<BigInt> = v.column(0).iter().map(|x| -x * &unit).collect();
        let kernel_cols: Vec<Vec<BigInt>> = (1..n).map(|j| v.column(j)).collect();
        let kernel = IntMatrix::from_columns(&kernel_cols)?;

        let gram = lattice.gram();
        let form = gram.congruence(&kernel);
        let gp = gram.as_matrix().mul_vec(&direction);
        let cross = kernel.transpose().mul_vec(&gp);
        let direction_norm = linalg::dot(&direction, &gp);

        let rhs: Vec<BigRational> = cross
            .iter()
            .map(|c| BigRational::from_integer(-c))
            .collect();
        let center_unit = linalg::solve_rational(form.as_matrix(), &rhs)?;
        let mut min_unit = BigRational::from_integer(direction_norm.clone());
        for (c, x) in cross.iter().zip(&center_unit) {
            min_unit += BigRational::from_integer(c.clone()) * x;
        }
        debug_assert_eq!(min_unit, BigRational::new(&h * &h, v0_norm.clone()));
        let (ldl_lower, ldl_diag) = linalg::ldl(&form).ok_or(Error::SingularMatrix)?;

        Ok(Self {
            basepoint: basepoint.to_vec(),
            basepoint_norm: v0_norm,
            step: h,
            direction,
            kernel,
            form,
            cross,
            direction_norm,
            center_unit,
            min_unit,
            ldl_lower,
            ldl_diag,
        })
    }

    pub fn basepoint(&self) -> &[BigInt] {
        &self.basepoint
    }

    pub fn basepoint_norm(&self) -> &BigInt {
        &self.basepoint_norm
    }

    /// Every value of `(e, v0)` is a multiple of this.
    pub fn value_step(&self) -> &BigInt {
        &self.step
    }

    /// All `e` with `(e,e) = k` and `(e, v0) = -n`, in ascending lexicographic order.
    pub fn level(&self, k: &BigInt, n: &BigInt) -> Result<Vec<Vec<BigInt>>> {
        if !k.is_positive() {
            return Err(Error::InvalidNorm(k.clone()));
        }
        if !n.is_multiple_of(&self.step) {
            return Ok(Vec::new());
        }
        let s = n / &self.step;
        let s_rat = BigRational::from_integer(s.clone());
        let m = self.form.dim();
        let center: Vec<BigRational> = self.center_unit.iter().map(|c| c * &s_rat).collect();
        let budget = BigRational::from_integer(k.clone()) - &self.min_unit * &s_rat * &s_rat;
        let mut out = Vec::new();
        if budget.is_negative() {
            return Ok(out);
        }
        let mut walk = Walk {
            en: self,
            k,
            s: &s,
            center: &center,
            t: vec![BigInt::zero(); m],
            out: &mut out,
        };
        walk.descend(m - 1, budget);
        out.sort();
        out.dedup();
        Ok(out)
    }

    fn assemble(&self, s: &BigInt, t: &[BigInt]) -> Vec<BigInt> {
        let mut e: Vec<BigInt> = self.direction.iter().map(|x| x * s).collect();
        for (j, tj) in t.iter().enumerate() {
            if tj.is_zero() {
                continue;
            }
            for (i, ei) in e.iter_mut().enumerate() {
                *ei += self.kernel.get(i, j) * tj;
            }
        }
        e
    }
}

struct Walk<'a> {
    en: &'a LevelEnumerator,
    k: &'a BigInt,
    s: &'a BigInt,
    center: &'a [BigRational],
    t: Vec<BigInt>,
    out: &'a mut Vec<Vec<BigInt>>,
}

impl Walk<'_> {
    /// Coordinates `j+1..m` are fixed; `remaining` bounds the contribution of `0..=j`.
    fn descend(&mut self, j: usize, remaining: BigRational) {
        if j == 0 {
            self.solve_first();
            return;
        }
        let en = self.en;
        let mut offset = BigRational::zero();
        for i in j + 1..self.t.len() {
            let y = BigRational::from_integer(self.t[i].clone()) - &self.center[i];
            offset += &en.ldl_lower[i][j] * y;
        }
        let mid = &self.center[j] - offset;
        let dj = &en.ldl_diag[j];
        let radius: BigInt = (&remaining / dj).floor().to_integer().sqrt();
        let lo: BigInt = mid.floor().to_integer() - &radius - 1;
        let hi = mid.ceil().to_integer() + &radius + 1;
        let mut x = lo;
        while x <= hi {
            let dev = BigRational::from_integer(x.clone()) - &mid;
            let used = dj * &dev * &dev;
            if used <= remaining {
                self.t[j] = x.clone();
                self.descend(j - 1, &remaining - used);
            }
            x += 1;
        }
        self.t[j] = BigInt::zero();
    }

    /// Solves `a·t0² + 2β·t0 + γ = k` over the integers with `t1..` fixed.
    fn solve_first(&mut self) {
        let en = self.en;
        let a = en.form.get(0, 0);
        let m = self.t.len();
        let mut beta = &en.cross[0] * self.s;
        let mut gamma = &en.direction_norm * self.s * self.s;
        for j in 1..m {
            let tj = &self.t[j];
            if tj.is_zero() {
                continue;
            }
            beta += en.form.get(0, j) * tj;
            gamma += &en.cross[j] * self.s * tj * 2;
            gamma += en.form.get(j, j) * tj * tj;
            for i in j + 1..m {
                gamma += en.form.get(i, j) * tj * &self.t[i] * 2;
            }
        }
        let c = gamma - self.k;
        let disc = &beta * &beta - a * &c;
        if disc.is_negative() {
            return;
        }
        let root = disc.sqrt();
        if &root * &root != disc {
            return;
        }
        let mut roots = vec![-&beta + &root];
        if !root.is_zero() {
            roots.push(-&beta - &root);
        }
        for num in roots {
            if num.is_multiple_of(a) {
                self.t[0] = num / a;
                let e = en.assemble(self.s, &self.t);
                self.out.push(e);
            }
        }
        self.t[0] = BigInt::zero();
    }
}

/// Weight `n²/k` of a level.
pub fn level_weight(k: &BigInt, n: &BigInt) -> BigRational {
    BigRational::new(n * n, k.clone())
}

/// The smallest positive `n` step at which roots of norm `k` can occur:
/// `(e, v0)` is a multiple of `h`, and a root needs `k | 2(e, v0)`.
pub fn root_level_step(value_step: &BigInt, k: &BigInt) -> BigInt {
    let half = k / k.gcd(&BigInt::from(2));
    half.lcm(value_step)
}

/// Calls `f` on every point with sup-norm exactly `s`, lexicographically;
/// stops early when `f` returns true.
pub(crate) fn for_each_shell_point(
    pt: &mut [i64],
    at: usize,
    s: i64,
    hit: bool,
    f: &mut dyn FnMut(&[i64]) -> bool,
) -> bool {
    if at == pt.len() {
        return (hit || s == 0) && f(pt);
    }
    let last = at + 1 == pt.len();
    let mut x = -s;
    while x <= s {
        let on_shell = x.abs() == s;
        if last && !hit && !on_shell && s > 0 {
            x = s;
            continue;
        }
        pt[at] = x;
        if for_each_shell_point(pt, at + 1, s, hit || on_shell, f) {
            return true;
        }
        if s == 0 {
            break;
        }
        x += 1;
    }
    false
}
