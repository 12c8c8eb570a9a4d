use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use vinberg::catalog;
use vinberg::coxeter::{self, CoxeterScheme};
use vinberg::engine::{self, Stop, VinbergConfig};
use vinberg::symmetry;
use vinberg::{IntMatrix, LatticeIsometry, SymmetricIntMatrix};

/// Edge label of a random forest: 3, 4, 6, or 0 for ∞.
fn forest() -> impl Strategy<Value = Vec<Option<(usize, u32)>>> {
    (1usize..=7).prop_flat_map(|n| {
        let slots: Vec<BoxedStrategy<Option<(usize, u32)>>> = (0..n)
            .map(|i| {
                if i == 0 {
                    Just(None).boxed()
                } else {
                    prop::option::weighted(0.8, (0..i, prop::sample::select(vec![3u32, 4, 6, 0])))
                        .boxed()
                }
            })
            .collect();
        slots
    })
}

/// Integral Gram matrix realising the forest with norms chosen along edges.
fn realise(parents: &[Option<(usize, u32)>], flips: &[bool]) -> SymmetricIntMatrix {
    let n = parents.len();
    let mut norms: Vec<BigRational> = Vec::with_capacity(n);
    for (i, p) in parents.iter().enumerate() {
        let up = flips.get(i).copied().unwrap_or(false);
        let norm = match p {
            None => BigRational::from_integer(1.into()),
            Some((j, m)) => {
                let ratio = match (m, up) {
                    (4, false) => BigRational::new(2.into(), 1.into()),
                    (4, true) => BigRational::new(1.into(), 2.into()),
                    (6, false) => BigRational::new(3.into(), 1.into()),
                    (6, true) => BigRational::new(1.into(), 3.into()),
                    _ => BigRational::from_integer(1.into()),
                };
                &norms[*j] * ratio
            }
        };
        norms.push(norm);
    }
    let scale = norms.iter().fold(BigInt::from(2), |acc, q| {
        num_integer::lcm(acc, q.denom().clone())
    });
    let norms: Vec<BigInt> = norms
        .iter()
        .map(|q| (q * &scale).to_integer() * 2)
        .collect();
    let mut g = IntMatrix::zeros(n, n);
    for i in 0..n {
        g.set(i, i, norms[i].clone());
    }
    for (i, p) in parents.iter().enumerate() {
        if let Some((j, m)) = p {
            let small: BigInt = norms[i].clone().min(norms[*j].clone());
            let inner: BigInt = match m {
                3 => -(small / BigInt::from(2)),
                6 => -(small * BigInt::from(3) / BigInt::from(2)),
                _ => -small,
            };
            g.set(i, *j, inner.clone());
            g.set(*j, i, inner);
        }
    }
    SymmetricIntMatrix::new(g).unwrap()
}

/// Definiteness from principal minors: (all positive, all non-negative, rank).
fn minor_oracle(g: &SymmetricIntMatrix) -> (bool, bool, usize) {
    let n = g.dim();
    let mut positive = true;
    let mut nonnegative = true;
    let mut rank = 0;
    for mask in 1u32..(1 << n) {
        let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let det = g
            .principal_submatrix(&idx)
            .as_matrix()
            .determinant()
            .unwrap();
        if !det.is_positive() {
            positive = false;
        }
        if det.is_negative() {
            nonnegative = false;
        }
        if !det.is_zero() {
            rank = rank.max(idx.len());
        }
    }
    (positive, nonnegative, rank)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn component_type_matches_gram_definiteness(parents in forest(), flips in prop::collection::vec(any::<bool>(), 7)) {
        let g = realise(&parents, &flips);
        let scheme = CoxeterScheme::from_root_gram(g.clone(), 3).unwrap();
        prop_assert!(scheme.is_consistent());
        let all: Vec<usize> = (0..scheme.len()).collect();
        for comp in scheme.components(&all) {
            let sub = g.principal_submatrix(&comp);
            let (pd, psd, rank) = minor_oracle(&sub);
            match coxeter::classify_component(&scheme, &comp) {
                Some(t) if t.is_affine() => {
                    prop_assert!(psd && !pd, "{:?} on {:?}", t, sub);
                    prop_assert_eq!(rank + 1, comp.len());
                    prop_assert_eq!(t.rank() + 1, comp.len());
                }
                Some(t) => {
                    prop_assert!(pd, "{:?} on {:?}", t, sub);
                    prop_assert_eq!(t.rank(), comp.len());
                }
                None => prop_assert!(!psd, "unclassified PSD component {:?}", sub),
            }
        }
    }
}

#[test]
fn cycles_of_simple_edges_are_affine_a() {
    for n in 3..=7 {
        let mut g = IntMatrix::zeros(n, n);
        for i in 0..n {
            g.set(i, i, BigInt::from(2));
            let j = (i + 1) % n;
            g.set(i, j, BigInt::from(-1));
            g.set(j, i, BigInt::from(-1));
        }
        let scheme = CoxeterScheme::from_root_gram(SymmetricIntMatrix::new(g).unwrap(), 3).unwrap();
        let all: Vec<usize> = (0..n).collect();
        let t = coxeter::classify_component(&scheme, &all).unwrap();
        assert_eq!(t, coxeter::CoxeterType::AffineA(n - 1));
    }
}

fn words(reflections: &[LatticeIsometry], len: usize) -> Vec<LatticeIsometry> {
    let mut out = vec![LatticeIsometry::identity(3)];
    let mut frontier = out.clone();
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &frontier {
            for r in reflections {
                next.push(w.compose(r));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

#[test]
fn order_class_is_inverse_and_conjugation_invariant() {
    let l = catalog::thin_lattice();
    let reflections: Vec<LatticeIsometry> = catalog::thin_lattice_reflections()
        .into_iter()
        .map(|m| l.isometry(m).unwrap())
        .collect();
    let samples = words(&reflections, 3);
    let conjugators = words(&reflections[..2], 2);
    let mut seen = BTreeMap::new();
    for u in &samples {
        let class = symmetry::order_class(&l, u).unwrap();
        *seen.entry(format!("{class:?}")).or_insert(0) += 1;
        assert_eq!(symmetry::order_class(&l, &u.inverse()).unwrap(), class);
        for v in &conjugators {
            let conj = v.compose(u).compose(&v.inverse());
            assert_eq!(symmetry::order_class(&l, &conj).unwrap(), class);
        }
    }
    // identity, reflections, and both kinds of infinite order all occur
    assert!(seen.len() >= 4, "{seen:?}");
}

#[test]
fn seeded_run_suffix_is_monotone() {
    let l = catalog::thin_lattice();
    let config = VinbergConfig {
        seeds: catalog::thin_lattice_roots()[..3].to_vec(),
        ..Default::default()
    };
    let run = engine::run(&l, &config, &Stop::Count(20)).unwrap();
    let state = &run.state;
    let skip = state.initial_roots().len();
    let weights: Vec<BigRational> = state.accepted()[skip..]
        .iter()
        .map(|r| state.weight(r))
        .collect();
    assert!(weights.windows(2).all(|w| w[0] <= w[1]), "{weights:?}");
}

#[test]
fn weight_stop_is_a_prefix_of_count_stop() {
    let l = catalog::thin_lattice();
    let by_count = engine::run(&l, &VinbergConfig::default(), &Stop::Count(12)).unwrap();
    let ceiling = by_count.state.weight(&by_count.state.accepted()[11]);
    let by_weight = engine::run(
        &l,
        &VinbergConfig::default(),
        &Stop::Weight(ceiling.clone()),
    )
    .unwrap();
    let accepted = by_weight.state.accepted();
    assert!(accepted.len() >= 12);
    assert_eq!(&accepted[..12], by_count.state.accepted());
    assert!(accepted
        .iter()
        .all(|r| by_weight.state.weight(r) <= ceiling));
}
