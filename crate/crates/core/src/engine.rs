//! The Vinberg algorithm.
//!
//! Starting from a timelike basepoint `v0`, the roots orthogonal to `v0` are
//! reduced to a simple system (stage 0). Further candidates `e` with
//! `(e, v0) = -n < 0` are then taken in order of the weight
//! `w(e) = (e, v0)² / (e, e)`, ties broken by smaller norm and then
//! lexicographically, and a candidate is accepted when it makes a non-obtuse
//! angle with every root accepted so far.

use std::cmp::Ordering;
use std::collections::VecDeque;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::coxeter::{self, VolumeVerdict};
use crate::enumerate::{self, LevelEnumerator};
use crate::error::{Error, Result};
use crate::lattice::{QuadraticLattice, Root, RootCheck};
use crate::linalg;
use crate::sieve;

/// How the basepoint is chosen when none is supplied.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BasepointRule {
    /// The negative vector of the Gram–Schmidt orthogonalisation of the
    /// standard basis, falling back to [`BasepointRule::Shell`] when an
    /// isotropic vector turns up along the way.
    #[default]
    Orthogonal,
    /// [`select_basepoint`].
    Shell,
}

#[derive(Clone, Debug, Default)]
pub struct VinbergConfig {
    /// Used as given (up to the orientation forced by seeds).
    pub basepoint: Option<Vec<BigInt>>,
    pub rule: BasepointRule,
    /// Roots placed in the chamber before anything else.
    pub seeds: Vec<Vec<BigInt>>,
    /// `next_root` fails with [`Error::Exhausted`] instead of entering a level
    /// of larger weight.
    pub weight_ceiling: Option<BigRational>,
    /// Overrides the sieved candidate norms.
    pub norms: Option<Vec<BigInt>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stop {
    /// Until this many roots are accepted, stage 0 included.
    Count(usize),
    /// Until every level of weight at most this has been examined.
    Weight(BigRational),
    /// Until the accepted roots bound a polyhedron of finite volume.
    FiniteVolume,
}

/// First vector of negative norm in sup-norm shells `1, 2, …`, each shell in
/// ascending lexicographic order, normalised so that its first nonzero
/// coordinate is positive.
pub fn select_basepoint(lattice: &QuadraticLattice) -> Vec<BigInt> {
    let n = lattice.rank();
    let mut pt = vec![0i64; n];
    for s in 1.. {
        let mut found = None;
        enumerate::for_each_shell_point(&mut pt, 0, s, false, &mut |p| {
            let v = linalg::to_bigint_vec(p);
            if lattice.norm(&v).expect("dimension").is_negative() {
                found = Some(v);
                return true;
            }
            false
        });
        if let Some(v) = found {
            return normalize_sign(v);
        }
    }
    unreachable!("a Lorentzian lattice has timelike vectors")
}

/// The negative-norm member of the Gram–Schmidt basis built from the standard
/// basis in index order, scaled to a primitive integer vector; `None` when an
/// intermediate vector is isotropic.
pub fn orthogonal_basepoint(lattice: &QuadraticLattice) -> Option<Vec<BigInt>> {
    let n = lattice.rank();
    let gram = lattice.gram();
    let inner = |x: &[BigRational], y: &[BigRational]| -> BigRational {
        let mut s = BigRational::zero();
        for i in 0..n {
            for j in 0..n {
                s += &x[i] * BigRational::from_integer(gram.get(i, j).clone()) * &y[j];
            }
        }
        s
    };
    let mut basis: Vec<(Vec<BigRational>, BigRational)> = Vec::new();
    for i in 0..n {
        let mut w: Vec<BigRational> = (0..n)
            .map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            })
            .collect();
        for (b, bb) in &basis {
            let c = inner(&w, b) / bb;
            for (wj, bj) in w.iter_mut().zip(b) {
                *wj -= &c * bj;
            }
        }
        let ww = inner(&w, &w);
        if ww.is_zero() {
            return None;
        }
        if ww.is_negative() {
            let den = w.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
            let v: Vec<BigInt> = w
                .iter()
                .map(|x| (x * BigRational::from_integer(den.clone())).to_integer())
                .collect();
            return Some(normalize_sign(linalg::primitive_part(&v)));
        }
        basis.push((w, ww));
    }
    None
}

fn normalize_sign(v: Vec<BigInt>) -> Vec<BigInt> {
    match v.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => v.iter().map(|x| -x).collect(),
        _ => v,
    }
}

/// Next unexplored level `(e, v0) = -next` for one candidate norm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelCursor {
    pub norm: BigInt,
    pub step: BigInt,
    pub next: BigInt,
}

impl LevelCursor {
    pub fn weight(&self) -> BigRational {
        enumerate::level_weight(&self.norm, &self.next)
    }
}

#[derive(Clone, Debug)]
pub struct VinbergState {
    lattice: QuadraticLattice,
    enumerator: LevelEnumerator,
    norms: Vec<BigInt>,
    accepted: Vec<Root>,
    seeded: usize,
    initial: usize,
    frontier: Vec<LevelCursor>,
    pending: VecDeque<Vec<BigInt>>,
    examined: u64,
    weight_ceiling: Option<BigRational>,
}

impl VinbergState {
    /// Chooses the basepoint, validates the seeds and computes the stage-0
    /// chamber.
    pub fn new(lattice: &QuadraticLattice, config: &VinbergConfig) -> Result<Self> {
        let seeds: Vec<Root> = config
            .seeds
            .iter()
            .map(|s| {
                lattice
                    .root(s)
                    .map_err(|e| Error::InconsistentSeeds(format!("{}: {e}", fmt_vec(s))))
            })
            .collect::<Result<_>>()?;
        for (i, a) in seeds.iter().enumerate() {
            for b in &seeds[i + 1..] {
                let ab = lattice.inner(a.vector(), b.vector())?;
                if ab.is_positive() {
                    return Err(Error::InconsistentSeeds(format!(
                        "{a} and {b} are obtuse (inner product {ab})"
                    )));
                }
            }
        }
        let v0 = match &config.basepoint {
            Some(v) => {
                let norm = lattice.norm(v)?;
                if !norm.is_negative() {
                    return Err(Error::InvalidBasepoint(norm));
                }
                v.clone()
            }
            None => match config.rule {
                BasepointRule::Orthogonal => {
                    orthogonal_basepoint(lattice).unwrap_or_else(|| select_basepoint(lattice))
                }
                BasepointRule::Shell => select_basepoint(lattice),
            },
        };
        let v0 = orient_towards(lattice, v0, &seeds)?;
        let norms = match &config.norms {
            Some(ns) => {
                if let Some(bad) = ns.iter().find(|k| !k.is_positive()) {
                    return Err(Error::InvalidNorm(bad.clone()));
                }
                let mut ns = ns.clone();
                ns.sort();
                ns.dedup();
                ns
            }
            None => sieve::root_norm_candidates(lattice),
        };
        let enumerator = LevelEnumerator::new(lattice, &v0)?;
        let frontier = norms
            .iter()
            .map(|k| {
                let step = enumerate::root_level_step(enumerator.value_step(), k);
                LevelCursor {
                    norm: k.clone(),
                    next: step.clone(),
                    step,
                }
            })
            .collect();
        let mut state = Self {
            lattice: lattice.clone(),
            enumerator,
            norms,
            accepted: Vec::new(),
            seeded: seeds.len(),
            initial: 0,
            frontier,
            pending: VecDeque::new(),
            examined: 0,
            weight_ceiling: config.weight_ceiling.clone(),
        };
        state.initial_chamber(seeds)?;
        Ok(state)
    }

    /// Stage 0: the seeds, then the roots orthogonal to `v0`.
    ///
    /// Each orthogonal pair `±e` is oriented to pair negatively with the first
    /// seed it is not orthogonal to, or else to be lexicographically negative.
    /// The oriented roots are taken in order of `(e·c)² / (e, e)` with
    /// `c = (M^{n-1}, …, M, 1)` for `M` exceeding twice every coordinate, so
    /// that `e·c` has the sign of `e`'s leading coordinate; this is the
    /// Vinberg order for a generic point of `v0^⊥`.
    fn initial_chamber(&mut self, seeds: Vec<Root>) -> Result<()> {
        self.accepted = seeds;
        let mut orthogonal: Vec<Root> = Vec::new();
        for k in &self.norms {
            for e in self.enumerator.level(k, &BigInt::zero())? {
                if let RootCheck::Accepted(r) = self.lattice.is_root(&e)? {
                    orthogonal.push(r);
                }
            }
        }
        let bound = orthogonal
            .iter()
            .flat_map(|r| r.vector().iter().map(|x| x.abs()))
            .max()
            .unwrap_or_else(BigInt::zero);
        let base: BigInt = bound * 2 + 1;
        let n = self.lattice.rank();
        let functional: Vec<BigInt> = (0..n).map(|i| base.pow((n - 1 - i) as u32)).collect();
        let mut oriented: Vec<(BigRational, Root)> = Vec::new();
        for r in orthogonal {
            let lex = linalg::dot(r.vector(), &functional);
            let towards_seed = self.accepted[..self.seeded]
                .iter()
                .map(|s| {
                    self.lattice
                        .inner(r.vector(), s.vector())
                        .expect("dimension")
                })
                .find(|x| !x.is_zero());
            let keep = match towards_seed {
                Some(x) => x.is_negative(),
                None => lex.is_negative(),
            };
            if keep {
                oriented.push((BigRational::new(&lex * &lex, r.norm().clone()), r));
            }
        }
        oriented.sort_by(|(wa, a), (wb, b)| {
            wa.cmp(wb)
                .then_with(|| a.norm().cmp(b.norm()))
                .then_with(|| a.vector().cmp(b.vector()))
        });
        for (_, r) in oriented {
            if self.is_compatible(r.vector())? {
                self.accepted.push(r);
            }
        }
        self.initial = self.accepted.len();
        Ok(())
    }

    fn is_compatible(&self, e: &[BigInt]) -> Result<bool> {
        for r in &self.accepted {
            if self.lattice.inner(e, r.vector())?.is_positive() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Accepts and returns the next root.
    pub fn next_root(&mut self) -> Result<Root> {
        loop {
            while let Some(e) = self.pending.pop_front() {
                self.examined += 1;
                if let RootCheck::Accepted(r) = self.lattice.is_root(&e)? {
                    if self.is_compatible(r.vector())? {
                        self.accepted.push(r.clone());
                        return Ok(r);
                    }
                }
            }
            let idx = self.next_level().ok_or(Error::NoCandidateNorms)?;
            let cursor = &self.frontier[idx];
            if let Some(ceiling) = &self.weight_ceiling {
                if &cursor.weight() > ceiling {
                    return Err(Error::Exhausted(ceiling.clone()));
                }
            }
            let level = self.enumerator.level(&cursor.norm, &cursor.next)?;
            self.pending.extend(level);
            let cursor = &mut self.frontier[idx];
            cursor.next += cursor.step.clone();
        }
    }

    /// Index of the unexplored level of least `(weight, norm)`.
    fn next_level(&self) -> Option<usize> {
        (0..self.frontier.len()).min_by(|&a, &b| {
            let (ca, cb) = (&self.frontier[a], &self.frontier[b]);
            cmp_weight(ca, cb).then_with(|| ca.norm.cmp(&cb.norm))
        })
    }

    pub fn lattice(&self) -> &QuadraticLattice {
        &self.lattice
    }

    pub fn basepoint(&self) -> &[BigInt] {
        self.enumerator.basepoint()
    }

    pub fn norms(&self) -> &[BigInt] {
        &self.norms
    }

    pub fn accepted(&self) -> &[Root] {
        &self.accepted
    }

    /// Seeds followed by the stage-0 roots orthogonal to the basepoint.
    pub fn initial_roots(&self) -> &[Root] {
        &self.accepted[..self.initial]
    }

    pub fn seed_count(&self) -> usize {
        self.seeded
    }

    pub fn frontier(&self) -> &[LevelCursor] {
        &self.frontier
    }

    /// Candidates handed to the acceptance test so far.
    pub fn examined(&self) -> u64 {
        self.examined
    }

    /// Every candidate of smaller weight has been examined, except those of
    /// the level currently being drained.
    pub fn explored_weight(&self) -> Option<BigRational> {
        self.frontier.iter().map(LevelCursor::weight).min()
    }

    pub fn weight(&self, root: &Root) -> BigRational {
        let n = self
            .lattice
            .inner(root.vector(), self.basepoint())
            .expect("dimension");
        enumerate::level_weight(root.norm(), &n)
    }

    pub fn weight_ceiling(&self) -> Option<&BigRational> {
        self.weight_ceiling.as_ref()
    }

    pub fn set_weight_ceiling(&mut self, ceiling: Option<BigRational>) {
        self.weight_ceiling = ceiling;
    }
}

fn cmp_weight(a: &LevelCursor, b: &LevelCursor) -> Ordering {
    // n_a² / k_a vs n_b² / k_b without building rationals
    (&a.next * &a.next * &b.norm).cmp(&(&b.next * &b.next * &a.norm))
}

/// Flips `v0` so that no seed pairs positively with it.
fn orient_towards(
    lattice: &QuadraticLattice,
    v0: Vec<BigInt>,
    seeds: &[Root],
) -> Result<Vec<BigInt>> {
    let signs: Vec<BigInt> = seeds
        .iter()
        .map(|s| lattice.inner(s.vector(), &v0))
        .collect::<Result<_>>()?;
    if signs.iter().all(|x| !x.is_positive()) {
        return Ok(v0);
    }
    if signs.iter().all(|x| !x.is_negative()) {
        return Ok(v0.iter().map(|x| -x).collect());
    }
    Err(Error::InconsistentSeeds(format!(
        "the basepoint {} separates the seed mirrors",
        fmt_vec(&v0)
    )))
}

fn fmt_vec(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub state: VinbergState,
    /// Verdict of the last criterion check for [`Stop::FiniteVolume`].
    pub volume: Option<VolumeVerdict>,
}

impl RunReport {
    pub fn terminated(&self) -> bool {
        self.volume.as_ref().is_some_and(VolumeVerdict::is_finite)
    }
}

pub fn run(lattice: &QuadraticLattice, config: &VinbergConfig, stop: &Stop) -> Result<RunReport> {
    let mut state = VinbergState::new(lattice, config)?;
    match stop {
        Stop::Count(m) => {
            while state.accepted.len() < *m {
                state.next_root()?;
            }
            Ok(RunReport {
                state,
                volume: None,
            })
        }
        Stop::Weight(w) => {
            let ceiling = match &config.weight_ceiling {
                Some(c) if c < w => c.clone(),
                _ => w.clone(),
            };
            state.weight_ceiling = Some(ceiling);
            loop {
                match state.next_root() {
                    Ok(_) => {}
                    Err(Error::Exhausted(c)) if &c == w => break,
                    Err(e) => return Err(e),
                }
            }
            state.weight_ceiling = config.weight_ceiling.clone();
            Ok(RunReport {
                state,
                volume: None,
            })
        }
        Stop::FiniteVolume => loop {
            if !state.accepted.is_empty() {
                let scheme = coxeter::build_scheme(lattice, &state.accepted)?;
                let verdict = coxeter::finite_volume_check(&scheme)?;
                if verdict.is_finite() {
                    return Ok(RunReport {
                        state,
                        volume: Some(verdict),
                    });
                }
            }
            state.next_root()?;
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::linalg::to_bigint_vec;

    fn b(v: &[i64]) -> Vec<BigInt> {
        to_bigint_vec(v)
    }

    #[test]
    fn shell_basepoints() {
        assert_eq!(
            select_basepoint(&catalog::unimodular_plane()),
            b(&[0, 0, 1])
        );
        let l = catalog::thin_lattice();
        let v = select_basepoint(&l);
        assert_eq!(v, b(&[1, 1, -1]));
        assert_eq!(l.norm(&v).unwrap(), BigInt::from(-32));
    }

    #[test]
    fn orthogonal_basepoints() {
        assert_eq!(
            orthogonal_basepoint(&catalog::unimodular_plane()),
            Some(b(&[0, 0, 1]))
        );
        assert_eq!(
            orthogonal_basepoint(&catalog::thin_lattice()),
            Some(b(&[7, -3, 0]))
        );
        // the first basis vector is isotropic
        assert_eq!(orthogonal_basepoint(&catalog::rootless_lattice()), None);
    }

    #[test]
    fn override_basepoint_is_kept() {
        let l = catalog::thin_lattice();
        let cfg = VinbergConfig {
            basepoint: Some(b(&[1, 1, -1])),
            ..Default::default()
        };
        let st = VinbergState::new(&l, &cfg).unwrap();
        assert_eq!(st.basepoint(), b(&[1, 1, -1]).as_slice());
        let bad = VinbergConfig {
            basepoint: Some(b(&[1, 0, 0])),
            ..Default::default()
        };
        assert!(matches!(
            VinbergState::new(&l, &bad),
            Err(Error::InvalidBasepoint(_))
        ));
    }

    #[test]
    fn unimodular_plane_stage_zero() {
        let st =
            VinbergState::new(&catalog::unimodular_plane(), &VinbergConfig::default()).unwrap();
        let roots: Vec<Vec<BigInt>> = st
            .initial_roots()
            .iter()
            .map(|r| r.vector().to_vec())
            .collect();
        // simple system of B2 in the orthogonal plane of (0,0,1)
        assert_eq!(roots.len(), 2);
        let l = st.lattice();
        assert!(l.inner(&roots[0], &roots[1]).unwrap() < BigInt::zero());
        assert!(roots
            .iter()
            .all(|r| linalg::dot(r, &b(&[0, 0, 1])).is_zero()));
    }

    #[test]
    fn seeds_are_validated() {
        let l = catalog::thin_lattice();
        let roots = catalog::thin_lattice_roots();
        let not_root = VinbergConfig {
            seeds: vec![b(&[1, 0, 0])],
            ..Default::default()
        };
        assert!(matches!(
            VinbergState::new(&l, &not_root),
            Err(Error::InconsistentSeeds(_))
        ));
        let obtuse = VinbergConfig {
            seeds: vec![roots[0].clone(), roots[1].iter().map(|x| -x).collect()],
            ..Default::default()
        };
        assert!(matches!(
            VinbergState::new(&l, &obtuse),
            Err(Error::InconsistentSeeds(_))
        ));
        let good = VinbergConfig {
            seeds: roots[..3].to_vec(),
            ..Default::default()
        };
        let st = VinbergState::new(&l, &good).unwrap();
        assert_eq!(st.seed_count(), 3);
        assert_eq!(st.basepoint(), b(&[-7, 3, 0]).as_slice());
    }

    #[test]
    fn seeded_run_finds_fourth_root() {
        let l = catalog::thin_lattice();
        let roots = catalog::thin_lattice_roots();
        let cfg = VinbergConfig {
            seeds: roots[..3].to_vec(),
            ..Default::default()
        };
        let report = run(&l, &cfg, &Stop::Count(4)).unwrap();
        assert_eq!(report.state.accepted()[3].vector(), roots[3].as_slice());
    }

    #[test]
    fn count_zero_is_stage_zero() {
        let l = catalog::unimodular_plane();
        let report = run(&l, &VinbergConfig::default(), &Stop::Count(0)).unwrap();
        assert_eq!(
            report.state.accepted().len(),
            report.state.initial_roots().len()
        );
    }

    #[test]
    fn reflective_plane_terminates() {
        let l = catalog::unimodular_plane();
        let report = run(&l, &VinbergConfig::default(), &Stop::FiniteVolume).unwrap();
        assert!(report.terminated());
        assert_eq!(report.state.accepted().len(), 3);
    }

    #[test]
    fn weight_ceiling_exhausts() {
        let l = catalog::rootless_lattice();
        let cfg = VinbergConfig {
            weight_ceiling: Some(BigRational::from_integer(BigInt::from(1000))),
            ..Default::default()
        };
        let mut st = VinbergState::new(&l, &cfg).unwrap();
        assert!(st.accepted().is_empty());
        assert!(matches!(st.next_root(), Err(Error::Exhausted(_))));
    }
}
