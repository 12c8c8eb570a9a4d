//! Coxeter schemes of root sets: edge labels, classification of subschemes,
//! Vinberg's finite-volume criterion and thinness certificates.
//!
//! Everything is decided from integer data. An edge between roots `e_i`, `e_j`
//! is determined by `inner² = (e_i,e_j)²` against `(e_i,e_i)(e_j,e_j)`, and
//! subschemes are classified against the finite and affine diagram tables.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{QuadraticLattice, Root};
use crate::linalg::{self, IntMatrix, Signature, SymmetricIntMatrix};

/// Schemes with more vertices than this are refused by the criterion.
pub const DEFAULT_SUBSCHEME_CUTOFF: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum EdgeLabel {
    /// Orthogonal mirrors, `m = 2`; no edge is drawn.
    None,
    /// `m = 3`.
    Simple,
    /// `m ∈ {4, 6}`.
    Labeled(u32),
    /// Parallel mirrors, `m = ∞`.
    Bold,
    /// Divergent mirrors; `|g|² = inner_sq / norm_product > 1`.
    Dotted {
        inner_sq: BigInt,
        norm_product: BigInt,
    },
}

impl EdgeLabel {
    /// Label for an inner product `inner ≤ 0` of roots with the given norms.
    pub fn from_inner(inner: &BigInt, norm_i: &BigInt, norm_j: &BigInt) -> Result<Self> {
        if inner.is_positive() {
            return Err(Error::ObtuseAngle(inner.clone()));
        }
        let inner_sq = inner * inner;
        let norm_product = norm_i * norm_j;
        if inner_sq.is_zero() {
            return Ok(EdgeLabel::None);
        }
        if inner_sq > norm_product {
            return Ok(EdgeLabel::Dotted {
                inner_sq,
                norm_product,
            });
        }
        if inner_sq == norm_product {
            return Ok(EdgeLabel::Bold);
        }
        let four: BigInt = &inner_sq * 4;
        if four == norm_product {
            Ok(EdgeLabel::Simple)
        } else if four == &norm_product * 2 {
            Ok(EdgeLabel::Labeled(4))
        } else if four == &norm_product * 3 {
            Ok(EdgeLabel::Labeled(6))
        } else {
            Err(Error::InvalidDihedralAngle {
                inner_sq,
                norm_product,
            })
        }
    }

    /// `m` for a finite dihedral angle `π/m`.
    pub fn order(&self) -> Option<u32> {
        match self {
            EdgeLabel::None => Some(2),
            EdgeLabel::Simple => Some(3),
            EdgeLabel::Labeled(m) => Some(*m),
            EdgeLabel::Bold | EdgeLabel::Dotted { .. } => None,
        }
    }

    pub fn is_edge(&self) -> bool {
        *self != EdgeLabel::None
    }

    pub fn kind(&self) -> &'static str {
        match self {
            EdgeLabel::None => "none",
            EdgeLabel::Simple => "simple",
            EdgeLabel::Labeled(_) => "labeled",
            EdgeLabel::Bold => "bold",
            EdgeLabel::Dotted { .. } => "dotted",
        }
    }

    /// `|g|²` for dotted edges.
    pub fn dotted_weight_squared(&self) -> Option<BigRational> {
        match self {
            EdgeLabel::Dotted {
                inner_sq,
                norm_product,
            } => Some(BigRational::new(inner_sq.clone(), norm_product.clone())),
            _ => None,
        }
    }

    /// `|g|` for dotted edges when it is rational.
    pub fn dotted_weight(&self) -> Option<BigRational> {
        let w = self.dotted_weight_squared()?;
        let (n, d) = (w.numer().sqrt(), w.denom().sqrt());
        (&n * &n == *w.numer() && &d * &d == *w.denom()).then(|| BigRational::new(n, d))
    }

    /// Text attached to a drawn edge: `4`, `6`, `∞` or `|g|=…`.
    pub fn label(&self) -> Option<String> {
        match self {
            EdgeLabel::None | EdgeLabel::Simple => None,
            EdgeLabel::Labeled(m) => Some(m.to_string()),
            EdgeLabel::Bold => Some("∞".to_string()),
            EdgeLabel::Dotted { .. } => {
                let text = match self.dotted_weight() {
                    Some(w) => w.to_string(),
                    None => format!("sqrt({})", self.dotted_weight_squared().expect("dotted")),
                };
                Some(format!("|g|={text}"))
            }
        }
    }
}

pub fn edge_label(lattice: &QuadraticLattice, ei: &Root, ej: &Root) -> Result<EdgeLabel> {
    let (ei, ej) = (lattice.root(ei.vector())?, lattice.root(ej.vector())?);
    let inner = lattice.inner(ei.vector(), ej.vector())?;
    EdgeLabel::from_inner(&inner, ei.norm(), ej.norm())
}

#[derive(Clone, Debug)]
pub struct CoxeterScheme {
    vertices: Vec<Root>,
    labels: Vec<Vec<EdgeLabel>>,
    root_gram: SymmetricIntMatrix,
    d: usize,
}

pub fn build_scheme(lattice: &QuadraticLattice, roots: &[Root]) -> Result<CoxeterScheme> {
    let n = roots.len();
    if n == 0 {
        return Err(Error::EmptyMatrix);
    }
    let vertices: Vec<Root> = roots
        .iter()
        .map(|r| lattice.root(r.vector()))
        .collect::<Result<_>>()?;
    let mut gram = IntMatrix::zeros(n, n);
    let mut labels = vec![vec![EdgeLabel::None; n]; n];
    for i in 0..n {
        gram.set(i, i, vertices[i].norm().clone());
        for j in i + 1..n {
            let inner = lattice.inner(vertices[i].vector(), vertices[j].vector())?;
            let label = EdgeLabel::from_inner(&inner, vertices[i].norm(), vertices[j].norm())?;
            gram.set(i, j, inner.clone());
            gram.set(j, i, inner);
            labels[i][j] = label.clone();
            labels[j][i] = label;
        }
    }
    Ok(CoxeterScheme {
        vertices,
        labels,
        root_gram: SymmetricIntMatrix::new(gram)?,
        d: lattice.hyperbolic_dim(),
    })
}

impl CoxeterScheme {
    /// Scheme of abstract roots with the given Gram matrix (positive diagonal,
    /// no acute angles). It has no lattice vectors attached.
    pub fn from_root_gram(gram: SymmetricIntMatrix, hyperbolic_dim: usize) -> Result<Self> {
        let n = gram.dim();
        let mut labels = vec![vec![EdgeLabel::None; n]; n];
        for i in 0..n {
            if !gram.get(i, i).is_positive() {
                return Err(Error::InvalidNorm(gram.get(i, i).clone()));
            }
            for j in i + 1..n {
                let label = EdgeLabel::from_inner(gram.get(i, j), gram.get(i, i), gram.get(j, j))?;
                labels[i][j] = label.clone();
                labels[j][i] = label;
            }
        }
        Ok(CoxeterScheme {
            vertices: Vec::new(),
            labels,
            root_gram: gram,
            d: hyperbolic_dim,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Empty for schemes built with [`CoxeterScheme::from_root_gram`].
    pub fn vertices(&self) -> &[Root] {
        &self.vertices
    }

    pub fn label(&self, i: usize, j: usize) -> &EdgeLabel {
        &self.labels[i][j]
    }

    /// Drawn edges `(i, j, label)` with `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize, &EdgeLabel)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                if self.labels[i][j].is_edge() {
                    out.push((i, j, &self.labels[i][j]));
                }
            }
        }
        out
    }

    pub fn root_gram(&self) -> &SymmetricIntMatrix {
        &self.root_gram
    }

    pub fn hyperbolic_dim(&self) -> usize {
        self.d
    }

    /// Recomputes every label from the root Gram matrix.
    pub fn is_consistent(&self) -> bool {
        let g = &self.root_gram;
        (0..self.len()).all(|i| {
            g.get(i, i).is_positive()
                && (0..self.len()).all(|j| {
                    i == j
                        || EdgeLabel::from_inner(g.get(i, j), g.get(i, i), g.get(j, j)).as_ref()
                            == Ok(&self.labels[i][j])
                })
        })
    }

    /// Connected components of the induced subscheme, each sorted, ordered by
    /// smallest vertex.
    pub fn components(&self, subset: &[usize]) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        let mut members: Vec<usize> = subset.to_vec();
        members.sort_unstable();
        members.dedup();
        for &start in &members {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut k = 0;
            while k < comp.len() {
                let v = comp[k];
                for &w in &members {
                    if !seen[w] && self.labels[v][w].is_edge() {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
                k += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        let all: Vec<usize> = (0..self.len()).collect();
        self.components(&all).len() == 1
    }

    /// Graphviz rendering: plain edges for `m = 3`, labels `4`, `6`, `∞`, and
    /// dashed edges labelled with `|g|` for divergent pairs.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph coxeter {\n  node [shape=circle];\n");
        for i in 0..self.len() {
            out.push_str(&format!("  {};\n", i + 1));
        }
        for (i, j, label) in self.edges() {
            let attrs = match label {
                EdgeLabel::Simple => String::new(),
                EdgeLabel::Dotted { .. } => {
                    format!(
                        " [style=dashed, label=\"{}\"]",
                        label.label().expect("dotted")
                    )
                }
                _ => format!(" [label=\"{}\"]", label.label().expect("labelled")),
            };
            out.push_str(&format!("  {} -- {}{};\n", i + 1, j + 1, attrs));
        }
        out.push_str("}\n");
        out
    }
}

/// Connected finite (`A`–`G`) and affine (`Affine*`) Coxeter diagrams with
/// labels in `{3, 4, 6, ∞}`. The index is the rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoxeterType {
    A(usize),
    B(usize),
    D(usize),
    E(usize),
    F4,
    G2,
    AffineA(usize),
    AffineB(usize),
    AffineC(usize),
    AffineD(usize),
    AffineE(usize),
    AffineF4,
    AffineG2,
}

impl CoxeterType {
    pub fn is_affine(&self) -> bool {
        matches!(
            self,
            CoxeterType::AffineA(_)
                | CoxeterType::AffineB(_)
                | CoxeterType::AffineC(_)
                | CoxeterType::AffineD(_)
                | CoxeterType::AffineE(_)
                | CoxeterType::AffineF4
                | CoxeterType::AffineG2
        )
    }

    /// Vertex count for finite types, vertex count − 1 for affine types.
    pub fn rank(&self) -> usize {
        match *self {
            CoxeterType::A(n)
            | CoxeterType::B(n)
            | CoxeterType::D(n)
            | CoxeterType::E(n)
            | CoxeterType::AffineA(n)
            | CoxeterType::AffineB(n)
            | CoxeterType::AffineC(n)
            | CoxeterType::AffineD(n)
            | CoxeterType::AffineE(n) => n,
            CoxeterType::F4 | CoxeterType::AffineF4 => 4,
            CoxeterType::G2 | CoxeterType::AffineG2 => 2,
        }
    }
}

impl fmt::Display for CoxeterType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoxeterType::A(n) => write!(f, "A{n}"),
            CoxeterType::B(n) => write!(f, "B{n}"),
            CoxeterType::D(n) => write!(f, "D{n}"),
            CoxeterType::E(n) => write!(f, "E{n}"),
            CoxeterType::F4 => write!(f, "F4"),
            CoxeterType::G2 => write!(f, "G2"),
            CoxeterType::AffineA(n) => write!(f, "~A{n}"),
            CoxeterType::AffineB(n) => write!(f, "~B{n}"),
            CoxeterType::AffineC(n) => write!(f, "~C{n}"),
            CoxeterType::AffineD(n) => write!(f, "~D{n}"),
            CoxeterType::AffineE(n) => write!(f, "~E{n}"),
            CoxeterType::AffineF4 => write!(f, "~F4"),
            CoxeterType::AffineG2 => write!(f, "~G2"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubschemeClass {
    /// Every component is of finite type (the empty scheme included).
    Elliptic(Vec<CoxeterType>),
    /// Every component is of affine type.
    Parabolic(Vec<CoxeterType>),
    Other,
}

impl SubschemeClass {
    pub fn rank(&self) -> Option<usize> {
        match self {
            SubschemeClass::Elliptic(c) | SubschemeClass::Parabolic(c) => {
                Some(c.iter().map(CoxeterType::rank).sum())
            }
            SubschemeClass::Other => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SubschemeClass::Elliptic(_) => "elliptic",
            SubschemeClass::Parabolic(_) => "parabolic",
            SubschemeClass::Other => "other",
        }
    }
}

pub fn classify_subscheme(scheme: &CoxeterScheme, subset: &[usize]) -> SubschemeClass {
    let mut finite = Vec::new();
    let mut affine = Vec::new();
    for comp in scheme.components(subset) {
        match classify_component(scheme, &comp) {
            Some(t) if t.is_affine() => affine.push(t),
            Some(t) => finite.push(t),
            None => return SubschemeClass::Other,
        }
    }
    match (finite.is_empty(), affine.is_empty()) {
        (_, true) => SubschemeClass::Elliptic(finite),
        (true, false) => SubschemeClass::Parabolic(affine),
        (false, false) => SubschemeClass::Other,
    }
}

/// Type of a connected subscheme, `None` when it is neither finite nor affine.
pub fn classify_component(scheme: &CoxeterScheme, comp: &[usize]) -> Option<CoxeterType> {
    let n = comp.len();
    let mut adj: Vec<Vec<(usize, u32)>> = vec![Vec::new(); n];
    let mut edges = 0;
    let mut bold = 0;
    for a in 0..n {
        for b in a + 1..n {
            let weight = match scheme.label(comp[a], comp[b]) {
                EdgeLabel::None => continue,
                EdgeLabel::Dotted { .. } => return None,
                EdgeLabel::Bold => {
                    bold += 1;
                    0
                }
                l => l.order().expect("finite"),
            };
            adj[a].push((b, weight));
            adj[b].push((a, weight));
            edges += 1;
        }
    }
    if bold > 0 {
        return (n == 2 && edges == 1).then_some(CoxeterType::AffineA(1));
    }
    if n == 1 {
        return Some(CoxeterType::A(1));
    }
    if edges == n {
        // a cycle: only ~A_{n-1} with all labels 3
        let cycle = adj
            .iter()
            .all(|nb| nb.len() == 2 && nb.iter().all(|&(_, m)| m == 3));
        return cycle.then_some(CoxeterType::AffineA(n - 1));
    }
    if edges != n - 1 {
        return None;
    }
    classify_tree(&adj)
}

fn classify_tree(adj: &[Vec<(usize, u32)>]) -> Option<CoxeterType> {
    let n = adj.len();
    let degrees: Vec<usize> = adj.iter().map(Vec::len).collect();
    let branch: Vec<usize> = (0..n).filter(|&v| degrees[v] >= 3).collect();
    let labels: Vec<u32> = adj
        .iter()
        .enumerate()
        .flat_map(|(v, nb)| nb.iter().filter(move |&&(w, _)| v < w).map(|&(_, m)| m))
        .collect();
    let fours = labels.iter().filter(|&&m| m == 4).count();
    let sixes = labels.iter().filter(|&&m| m == 6).count();
    let all_simple = fours == 0 && sixes == 0;

    if branch.is_empty() {
        let path = path_labels(adj);
        return classify_path(&path);
    }
    if degrees.iter().any(|&d| d > 4) {
        return None;
    }
    if let Some(&hub) = branch.iter().find(|&&v| degrees[v] == 4) {
        let star = n == 5
            && branch.len() == 1
            && all_simple
            && adj[hub].iter().all(|&(w, _)| degrees[w] == 1);
        return star.then_some(CoxeterType::AffineD(4));
    }
    if branch.len() == 2 {
        // ~D_n: both forks carry two leaves
        let forks = branch
            .iter()
            .all(|&b| adj[b].iter().filter(|&&(w, _)| degrees[w] == 1).count() == 2);
        return (all_simple && forks).then_some(CoxeterType::AffineD(n - 1));
    }
    if branch.len() > 2 || sixes > 0 || fours > 1 {
        return None;
    }
    let hub = branch[0];
    // arms as label sequences walking away from the hub
    let mut arms: Vec<Vec<u32>> = adj[hub]
        .iter()
        .map(|&(first, m)| {
            let mut seq = vec![m];
            let (mut prev, mut cur) = (hub, first);
            while let Some(&(next, m)) = adj[cur].iter().find(|&&(w, _)| w != prev) {
                seq.push(m);
                prev = cur;
                cur = next;
            }
            seq
        })
        .collect();
    arms.sort_by_key(Vec::len);
    let lens: Vec<usize> = arms.iter().map(Vec::len).collect();
    if fours == 1 {
        // ~B_n: fork of two leaves, the long arm ending in a 4
        let long = &arms[2];
        let ok = lens[0] == 1
            && lens[1] == 1
            && arms[0][0] == 3
            && arms[1][0] == 3
            && *long.last().expect("arm") == 4;
        // with three length-1 arms the 4 may sit on any of them
        let star = lens == [1, 1, 1];
        return (ok || star).then_some(CoxeterType::AffineB(n - 1));
    }
    match lens.as_slice() {
        [1, 1, k] => Some(CoxeterType::D(k + 3)),
        [1, 2, 2] => Some(CoxeterType::E(6)),
        [1, 2, 3] => Some(CoxeterType::E(7)),
        [1, 2, 4] => Some(CoxeterType::E(8)),
        [2, 2, 2] => Some(CoxeterType::AffineE(6)),
        [1, 3, 3] => Some(CoxeterType::AffineE(7)),
        [1, 2, 5] => Some(CoxeterType::AffineE(8)),
        _ => None,
    }
}

/// Edge labels along a path, read from one endpoint.
fn path_labels(adj: &[Vec<(usize, u32)>]) -> Vec<u32> {
    let start = (0..adj.len())
        .find(|&v| adj[v].len() == 1)
        .expect("a path has endpoints");
    let mut out = Vec::new();
    let (mut prev, mut cur) = (usize::MAX, start);
    while let Some(&(next, m)) = adj[cur].iter().find(|&&(w, _)| w != prev) {
        out.push(m);
        prev = cur;
        cur = next;
    }
    out
}

fn classify_path(labels: &[u32]) -> Option<CoxeterType> {
    let n = labels.len() + 1;
    let fours: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == 4).collect();
    let sixes: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == 6).collect();
    let last = labels.len() - 1;
    match (fours.as_slice(), sixes.as_slice()) {
        ([], []) => Some(CoxeterType::A(n)),
        ([i], []) if *i == 0 || *i == last => Some(CoxeterType::B(n)),
        ([1], []) if labels.len() == 3 => Some(CoxeterType::F4),
        ([i], []) if labels.len() == 4 && (*i == 1 || *i == 2) => {
            // 3,3,4,3 read from either end
            let forward = labels == [3, 3, 4, 3];
            let backward = labels == [3, 4, 3, 3];
            (forward || backward).then_some(CoxeterType::AffineF4)
        }
        ([i, j], []) if *i == 0 && *j == last => Some(CoxeterType::AffineC(n - 1)),
        ([], [_]) if n == 2 => Some(CoxeterType::G2),
        ([], [i]) if n == 3 && (*i == 0 || *i == 1) => Some(CoxeterType::AffineG2),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VolumeVerdict {
    /// Every rank-`(d−1)` elliptic subscheme lies in exactly two vertex
    /// subschemes; `vertices` lists them all.
    Finite { vertices: Vec<Vec<usize>> },
    /// `missing` is a rank-`(d−1)` elliptic subscheme with `extensions ≠ 2`,
    /// or `None` when the scheme has no vertex subscheme at all.
    Infinite {
        missing: Option<Vec<usize>>,
        extensions: usize,
    },
}

impl VolumeVerdict {
    pub fn is_finite(&self) -> bool {
        matches!(self, VolumeVerdict::Finite { .. })
    }
}

/// Vinberg's criterion: vertices are elliptic subschemes of rank `d` and
/// parabolic subschemes of rank `d − 1`; the volume is finite iff some vertex
/// exists and every elliptic subscheme of rank `d − 1` lies in exactly two.
pub fn finite_volume_check(scheme: &CoxeterScheme) -> Result<VolumeVerdict> {
    finite_volume_check_with_cutoff(scheme, DEFAULT_SUBSCHEME_CUTOFF)
}

pub fn finite_volume_check_with_cutoff(
    scheme: &CoxeterScheme,
    cutoff: usize,
) -> Result<VolumeVerdict> {
    let d = scheme.hyperbolic_dim();
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    if scheme.len() > cutoff {
        return Err(Error::SubschemeCutoff {
            vertices: scheme.len(),
            cutoff,
        });
    }
    let max_size = d.max(2 * (d - 1));
    let mut edges: Vec<Vec<usize>> = Vec::new();
    let mut vertices: Vec<Vec<usize>> = Vec::new();
    let mut current = Vec::new();
    collect_subschemes(
        scheme,
        0,
        max_size,
        d,
        &mut current,
        &mut edges,
        &mut vertices,
    );
    if vertices.is_empty() {
        return Ok(VolumeVerdict::Infinite {
            missing: None,
            extensions: 0,
        });
    }
    for edge in &edges {
        let extensions = vertices
            .iter()
            .filter(|v| edge.iter().all(|x| v.binary_search(x).is_ok()))
            .count();
        if extensions != 2 {
            return Ok(VolumeVerdict::Infinite {
                missing: Some(edge.clone()),
                extensions,
            });
        }
    }
    Ok(VolumeVerdict::Finite { vertices })
}

/// Depth-first walk over subsets whose components are all finite or affine;
/// that property passes to subsets, so the walk prunes at the first failure.
fn collect_subschemes(
    scheme: &CoxeterScheme,
    from: usize,
    max_size: usize,
    d: usize,
    current: &mut Vec<usize>,
    edges: &mut Vec<Vec<usize>>,
    vertices: &mut Vec<Vec<usize>>,
) {
    for v in from..scheme.len() {
        current.push(v);
        let comps = scheme.components(current);
        let types: Option<Vec<CoxeterType>> = comps
            .iter()
            .map(|c| classify_component(scheme, c))
            .collect();
        if let Some(types) = types {
            let affine = types.iter().filter(|t| t.is_affine()).count();
            let rank: usize = types.iter().map(CoxeterType::rank).sum();
            if affine == 0 && rank == d - 1 {
                edges.push(current.clone());
            }
            if (affine == 0 && rank == d) || (affine == types.len() && rank == d - 1) {
                vertices.push(current.clone());
            }
            if current.len() < max_size {
                collect_subschemes(scheme, v + 1, max_size, d, current, edges, vertices);
            }
        }
        current.pop();
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    Elliptic,
    Affine,
    Other,
}

impl Classification {
    pub fn name(self) -> &'static str {
        match self {
            Classification::Elliptic => "elliptic",
            Classification::Affine => "affine",
            Classification::Other => "other",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ThinVerdict {
    Thin,
    NotThin(NotThinReason),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NotThinReason {
    Disconnected,
    Elliptic,
    Affine,
    FiniteVolume,
    Signature,
}

impl NotThinReason {
    pub fn name(self) -> &'static str {
        match self {
            NotThinReason::Disconnected => "disconnected",
            NotThinReason::Elliptic => "elliptic",
            NotThinReason::Affine => "affine",
            NotThinReason::FiniteVolume => "finite-volume",
            NotThinReason::Signature => "signature",
        }
    }
}

/// The conditions under which the reflections in a root set generate a thin
/// subgroup: connected scheme, neither elliptic nor affine, infinite volume,
/// and root Gram matrix of signature `(d, 1, m − d − 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThinCertificate {
    pub m: usize,
    pub connected: bool,
    pub classification: Classification,
    pub finite_volume: bool,
    pub gram_signature: Signature,
    pub verdict: ThinVerdict,
}

impl ThinCertificate {
    pub fn is_thin(&self) -> bool {
        self.verdict == ThinVerdict::Thin
    }
}

pub fn thin_certificate(lattice: &QuadraticLattice, roots: &[Root]) -> Result<ThinCertificate> {
    let scheme = build_scheme(lattice, roots)?;
    let m = scheme.len();
    let d = scheme.hyperbolic_dim();
    let connected = scheme.is_connected();
    let all: Vec<usize> = (0..m).collect();
    let classification = match classify_subscheme(&scheme, &all) {
        SubschemeClass::Elliptic(_) => Classification::Elliptic,
        SubschemeClass::Parabolic(_) => Classification::Affine,
        SubschemeClass::Other => Classification::Other,
    };
    let finite_volume = finite_volume_check(&scheme)?.is_finite();
    let gram_signature = linalg::signature(scheme.root_gram());
    let expected = Signature::new(d, 1, m.saturating_sub(d + 1));
    let verdict = if !connected {
        ThinVerdict::NotThin(NotThinReason::Disconnected)
    } else if classification == Classification::Elliptic {
        ThinVerdict::NotThin(NotThinReason::Elliptic)
    } else if classification == Classification::Affine {
        ThinVerdict::NotThin(NotThinReason::Affine)
    } else if finite_volume {
        ThinVerdict::NotThin(NotThinReason::FiniteVolume)
    } else if gram_signature != expected || m < d + 1 {
        ThinVerdict::NotThin(NotThinReason::Signature)
    } else {
        ThinVerdict::Thin
    };
    Ok(ThinCertificate {
        m,
        connected,
        classification,
        finite_volume,
        gram_signature,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn listed_roots(n: usize) -> (QuadraticLattice, Vec<Root>) {
        let l = catalog::thin_lattice();
        let roots = catalog::thin_lattice_roots()
            .iter()
            .take(n)
            .map(|v| l.root(v).unwrap())
            .collect();
        (l, roots)
    }

    /// A scheme over made-up vertices, for classification tests only.
    fn synthetic(n: usize, d: usize, edges: &[(usize, usize, EdgeLabel)]) -> CoxeterScheme {
        let l = catalog::unimodular_plane();
        let root = l.root_i64(&[1, 0, 0]).unwrap();
        let mut labels = vec![vec![EdgeLabel::None; n]; n];
        for (i, j, lab) in edges {
            labels[*i][*j] = lab.clone();
            labels[*j][*i] = lab.clone();
        }
        CoxeterScheme {
            vertices: vec![root; n],
            labels,
            root_gram: SymmetricIntMatrix::diagonal(&vec![1; n]),
            d,
        }
    }

    fn path(labels: &[EdgeLabel]) -> CoxeterScheme {
        let edges: Vec<_> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (i, i + 1, l.clone()))
            .collect();
        synthetic(labels.len() + 1, 2, &edges)
    }

    fn class_of(s: &CoxeterScheme) -> SubschemeClass {
        classify_subscheme(s, &(0..s.len()).collect::<Vec<_>>())
    }

    use EdgeLabel::{Bold, Labeled, Simple};

    #[test]
    fn first_four_walls() {
        let (l, roots) = listed_roots(4);
        assert_eq!(edge_label(&l, &roots[0], &roots[2]).unwrap(), Bold);
        let e12 = edge_label(&l, &roots[0], &roots[1]).unwrap();
        assert_eq!(
            e12.dotted_weight(),
            Some(BigRational::from_integer(BigInt::from(2)))
        );
        let s = build_scheme(&l, &roots).unwrap();
        assert!(s.is_consistent());
        assert_eq!(s.label(1, 3), &Bold);
        let weights: Vec<_> = [(0, 1), (0, 3), (1, 2), (2, 3)]
            .iter()
            .map(|&(i, j)| s.label(i, j).label().unwrap())
            .collect();
        assert_eq!(weights, ["|g|=2", "|g|=5", "|g|=5", "|g|=37"]);
    }

    #[test]
    fn obtuse_and_invalid_angles() {
        let one = BigInt::from(1);
        assert!(matches!(
            EdgeLabel::from_inner(&one, &one, &one),
            Err(Error::ObtuseAngle(_))
        ));
        let five = BigInt::from(5);
        assert!(matches!(
            EdgeLabel::from_inner(&BigInt::from(-1), &five, &one),
            Err(Error::InvalidDihedralAngle { .. })
        ));
        assert_eq!(
            EdgeLabel::from_inner(&BigInt::zero(), &five, &one).unwrap(),
            EdgeLabel::None
        );
    }

    #[test]
    fn small_schemes() {
        let l = catalog::unimodular_plane();
        let r = l.root_i64(&[1, 0, 0]).unwrap();
        let s = build_scheme(&l, std::slice::from_ref(&r)).unwrap();
        assert!(s.is_connected());
        assert_eq!(
            class_of(&s),
            SubschemeClass::Elliptic(vec![CoxeterType::A(1)])
        );
        let t = l.root_i64(&[0, 1, 0]).unwrap();
        let s = build_scheme(&l, &[r, t]).unwrap();
        assert_eq!(s.components(&[0, 1]).len(), 2);
    }

    #[test]
    fn finite_tables() {
        assert_eq!(
            class_of(&path(&[Simple, Simple])),
            SubschemeClass::Elliptic(vec![CoxeterType::A(3)])
        );
        assert_eq!(
            class_of(&path(&[Labeled(4), Simple])),
            SubschemeClass::Elliptic(vec![CoxeterType::B(3)])
        );
        assert_eq!(
            class_of(&path(&[Simple, Labeled(4), Simple])),
            SubschemeClass::Elliptic(vec![CoxeterType::F4])
        );
        assert_eq!(
            class_of(&path(&[Labeled(6)])),
            SubschemeClass::Elliptic(vec![CoxeterType::G2])
        );
        let d4 = synthetic(4, 2, &[(0, 1, Simple), (0, 2, Simple), (0, 3, Simple)]);
        assert_eq!(
            class_of(&d4),
            SubschemeClass::Elliptic(vec![CoxeterType::D(4)])
        );
        let e8 = synthetic(
            8,
            2,
            &[
                (0, 1, Simple),
                (1, 2, Simple),
                (2, 3, Simple),
                (3, 4, Simple),
                (4, 5, Simple),
                (5, 6, Simple),
                (2, 7, Simple),
            ],
        );
        assert_eq!(
            class_of(&e8),
            SubschemeClass::Elliptic(vec![CoxeterType::E(8)])
        );
    }

    #[test]
    fn affine_tables() {
        assert_eq!(path(&[Bold]).len(), 2);
        assert_eq!(
            class_of(&path(&[Bold])),
            SubschemeClass::Parabolic(vec![CoxeterType::AffineA(1)])
        );
        let tri = synthetic(3, 2, &[(0, 1, Simple), (1, 2, Simple), (0, 2, Simple)]);
        assert_eq!(
            class_of(&tri),
            SubschemeClass::Parabolic(vec![CoxeterType::AffineA(2)])
        );
        assert_eq!(
            class_of(&path(&[Labeled(4), Labeled(4)])),
            SubschemeClass::Parabolic(vec![CoxeterType::AffineC(2)])
        );
        assert_eq!(
            class_of(&path(&[Simple, Simple, Labeled(4), Simple])),
            SubschemeClass::Parabolic(vec![CoxeterType::AffineF4])
        );
        assert_eq!(
            class_of(&path(&[Simple, Labeled(6)])),
            SubschemeClass::Parabolic(vec![CoxeterType::AffineG2])
        );
        let b3 = synthetic(4, 2, &[(0, 1, Simple), (0, 2, Simple), (0, 3, Labeled(4))]);
        assert_eq!(
            class_of(&b3),
            SubschemeClass::Parabolic(vec![CoxeterType::AffineB(3)])
        );
        let d4 = synthetic(
            5,
            2,
            &[
                (0, 1, Simple),
                (0, 2, Simple),
                (0, 3, Simple),
                (0, 4, Simple),
            ],
        );
        assert_eq!(
            class_of(&d4),
            SubschemeClass::Parabolic(vec![CoxeterType::AffineD(4)])
        );
        let d5 = synthetic(
            6,
            2,
            &[
                (0, 1, Simple),
                (0, 2, Simple),
                (0, 3, Simple),
                (3, 4, Simple),
                (3, 5, Simple),
            ],
        );
        assert_eq!(
            class_of(&d5),
            SubschemeClass::Parabolic(vec![CoxeterType::AffineD(5)])
        );
    }

    #[test]
    fn dotted_edges_are_other() {
        let (l, roots) = listed_roots(2);
        let s = build_scheme(&l, &roots).unwrap();
        assert_eq!(class_of(&s), SubschemeClass::Other);
        let mixed = synthetic(3, 2, &[(0, 1, Bold)]);
        assert_eq!(class_of(&mixed), SubschemeClass::Other);
    }

    #[test]
    fn volume_examples() {
        let (l, roots) = listed_roots(4);
        let s = build_scheme(&l, &roots).unwrap();
        assert!(!finite_volume_check(&s).unwrap().is_finite());
        let tri = synthetic(3, 2, &[(0, 1, Simple), (0, 2, Simple), (1, 2, Labeled(4))]);
        assert!(finite_volume_check(&tri).unwrap().is_finite());
        let two = synthetic(2, 2, &[(0, 1, Simple)]);
        assert!(!finite_volume_check(&two).unwrap().is_finite());
        let low = synthetic(2, 1, &[]);
        assert_eq!(finite_volume_check(&low), Err(Error::DimensionTooSmall(1)));
        assert!(matches!(
            finite_volume_check_with_cutoff(&tri, 2),
            Err(Error::SubschemeCutoff {
                vertices: 3,
                cutoff: 2
            })
        ));
    }

    #[test]
    fn thin_certificates() {
        let (l, roots) = listed_roots(4);
        let cert = thin_certificate(&l, &roots).unwrap();
        assert!(cert.is_thin());
        assert_eq!(cert.gram_signature, Signature::new(2, 1, 1));
        let one = thin_certificate(&l, &roots[..1]).unwrap();
        assert_eq!(one.verdict, ThinVerdict::NotThin(NotThinReason::Elliptic));
        let pair = thin_certificate(&l, &[roots[0].clone(), roots[2].clone()]).unwrap();
        assert_eq!(pair.verdict, ThinVerdict::NotThin(NotThinReason::Affine));
    }

    #[test]
    fn dot_output() {
        let (l, roots) = listed_roots(4);
        let dot = build_scheme(&l, &roots).unwrap().to_dot();
        assert!(dot.contains("1 -- 3 [label=\"∞\"];"));
        assert!(dot.contains("1 -- 2 [style=dashed, label=\"|g|=2\"];"));
    }
}
