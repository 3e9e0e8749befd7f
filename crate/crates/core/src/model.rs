//! Domain types: wildcard matrices, annotated graphs, partial assignments and
//! decompositions, plus the verification predicates everything else is checked
//! against.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::scalar::{masked_sum, Scalar, DEFAULT_EPS};

/// A matrix entry: a weight or the wildcard `*`.
#[derive(Debug, Clone, PartialEq)]
pub enum Entry<S> {
    Star,
    Val(S),
}

impl<S> Entry<S> {
    pub fn is_star(&self) -> bool {
        matches!(self, Entry::Star)
    }

    pub fn value(&self) -> Option<&S> {
        match self {
            Entry::Star => None,
            Entry::Val(v) => Some(v),
        }
    }
}

/// Wildcard equality: `*` matches anything, values compare up to `eps`.
pub fn star_eq<S: Scalar>(a: &Entry<S>, b: &Entry<S>, eps: f64) -> bool {
    match (a, b) {
        (Entry::Star, _) | (_, Entry::Star) => true,
        (Entry::Val(x), Entry::Val(y)) => x.close(y, eps),
    }
}

/// A symmetric `n x n` matrix with wildcards allowed on the diagonal, and the
/// clique budget `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance<S> {
    n: usize,
    k: usize,
    entries: Vec<Entry<S>>,
    eps: f64,
}

impl<S: Scalar> Instance<S> {
    /// Builds an instance from row-major entries, checking symmetry, wildcard
    /// placement and non-negativity.
    pub fn new(n: usize, k: usize, entries: Vec<Entry<S>>, eps: f64) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::Dimension(format!("expected {} entries, got {}", n * n, entries.len())));
        }
        if k > crate::MAX_COLUMNS {
            return Err(Error::BudgetTooLarge(k));
        }
        for i in 0..n {
            for j in 0..n {
                let e = &entries[i * n + j];
                match e {
                    Entry::Star if i != j => {
                        return Err(Error::InvalidInstance(format!("wildcard off the diagonal at ({i},{j})")))
                    }
                    Entry::Val(v) if v.is_negative_tol(eps) => {
                        return Err(Error::InvalidInstance(format!("negative entry at ({i},{j})")))
                    }
                    _ => {}
                }
                if j > i && !star_eq(e, &entries[j * n + i], eps) {
                    return Err(Error::InvalidInstance(format!("asymmetric entries at ({i},{j})")));
                }
            }
        }
        Ok(Instance { n, k, entries, eps })
    }

    /// Convenience constructor from nested rows; `None` is a wildcard.
    pub fn from_rows(rows: &[Vec<Option<S>>], k: usize) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for r in rows {
            if r.len() != n {
                return Err(Error::Dimension("matrix is not square".into()));
            }
            entries.extend(r.iter().map(|e| match e {
                Some(v) => Entry::Val(v.clone()),
                None => Entry::Star,
            }));
        }
        Self::new(n, k, entries, DEFAULT_EPS)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn get(&self, i: usize, j: usize) -> &Entry<S> {
        &self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[Entry<S>] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    /// Same matrix with a different budget.
    pub fn with_budget(&self, k: usize) -> Result<Self> {
        if k > crate::MAX_COLUMNS {
            return Err(Error::BudgetTooLarge(k));
        }
        Ok(Instance { k, ..self.clone() })
    }

    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps = eps;
        self
    }

    /// Largest non-wildcard entry (zero for an empty matrix).
    pub fn max_entry(&self) -> S {
        let mut best = S::zero();
        for e in &self.entries {
            if let Entry::Val(v) = e {
                if *v > best {
                    best = v.clone();
                }
            }
        }
        best
    }

    /// First non-wildcard entry that is not integral, if any.
    pub fn first_non_integral(&self) -> Option<(usize, usize)> {
        for i in 0..self.n {
            for j in i..self.n {
                if let Entry::Val(v) = self.get(i, j) {
                    if v.to_integer(self.eps).is_none() {
                        return Some((i, j));
                    }
                }
            }
        }
        None
    }

    /// Principal submatrix on `rows` (in the given order).
    pub fn submatrix(&self, rows: &[usize]) -> Self {
        let m = rows.len();
        let mut entries = Vec::with_capacity(m * m);
        for &i in rows {
            for &j in rows {
                entries.push(self.get(i, j).clone());
            }
        }
        Instance { n: m, k: self.k, entries, eps: self.eps }
    }

    pub(crate) fn set_diagonal(&mut self, i: usize, e: Entry<S>) {
        let n = self.n;
        self.entries[i * n + i] = e;
    }
}

/// A graph with non-negative edge weights and optional vertex annotations
/// (required total clique weight through a vertex).
#[derive(Debug, Clone, PartialEq)]
pub struct AnnotatedGraph<S> {
    n: usize,
    labels: Vec<String>,
    edges: Vec<(usize, usize, S)>,
    index: BTreeMap<(usize, usize), usize>,
    annotated: BTreeMap<usize, S>,
    eps: f64,
}

impl<S: Scalar> AnnotatedGraph<S> {
    /// Vertices are labelled by their index.
    pub fn new(n: usize, edges: Vec<(usize, usize, S)>, annotated: BTreeMap<usize, S>) -> Result<Self> {
        let labels = (0..n).map(|i| i.to_string()).collect();
        Self::with_labels(labels, edges, annotated, DEFAULT_EPS)
    }

    pub fn with_labels(
        labels: Vec<String>,
        edges: Vec<(usize, usize, S)>,
        annotated: BTreeMap<usize, S>,
        eps: f64,
    ) -> Result<Self> {
        let n = labels.len();
        let mut index = BTreeMap::new();
        let mut norm = Vec::with_capacity(edges.len());
        for (u, v, w) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!("edge ({u},{v}) out of range for n={n}")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at {u}")));
            }
            if w.is_negative_tol(eps) {
                return Err(Error::InvalidGraph(format!("negative weight on edge ({u},{v})")));
            }
            let key = (u.min(v), u.max(v));
            if index.insert(key, norm.len()).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate edge ({},{})", key.0, key.1)));
            }
            norm.push((key.0, key.1, w));
        }
        for (&v, w) in &annotated {
            if v >= n {
                return Err(Error::InvalidGraph(format!("annotated vertex {v} out of range")));
            }
            if w.is_negative_tol(eps) {
                return Err(Error::InvalidGraph(format!("negative annotation on vertex {v}")));
            }
        }
        Ok(AnnotatedGraph { n, labels, edges: norm, index, annotated, eps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps = eps;
        self
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    /// Edges as `(u, v, w)` with `u < v`, in insertion order.
    pub fn edges(&self) -> &[(usize, usize, S)] {
        &self.edges
    }

    pub fn annotated(&self) -> &BTreeMap<usize, S> {
        &self.annotated
    }

    /// Weight of edge `uv`, `None` if absent.
    pub fn weight(&self, u: usize, v: usize) -> Option<&S> {
        let key = (u.min(v), u.max(v));
        self.index.get(&key).map(|&i| &self.edges[i].2)
    }

    /// Neighbour lists over edges with positive weight.
    pub fn adjacency(&self) -> Vec<Vec<(usize, S)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (u, v, w) in &self.edges {
            if w.is_positive_tol(self.eps) {
                adj[*u].push((*v, w.clone()));
                adj[*v].push((*u, w.clone()));
            }
        }
        for list in &mut adj {
            list.sort_by_key(|(x, _)| *x);
        }
        adj
    }

    /// Induced subgraph on `keep` (ascending original indices); labels carry over.
    pub fn induced(&self, keep: &[usize], drop_edges: &dyn Fn(usize, usize) -> bool) -> Self {
        let mut pos = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            pos[v] = i;
        }
        let labels = keep.iter().map(|&v| self.labels[v].clone()).collect();
        let mut edges = Vec::new();
        let mut index = BTreeMap::new();
        for (u, v, w) in &self.edges {
            if pos[*u] == usize::MAX || pos[*v] == usize::MAX || drop_edges(*u, *v) {
                continue;
            }
            let key = (pos[*u].min(pos[*v]), pos[*u].max(pos[*v]));
            index.insert(key, edges.len());
            edges.push((key.0, key.1, w.clone()));
        }
        let annotated = self
            .annotated
            .iter()
            .filter(|(v, _)| pos[**v] != usize::MAX)
            .map(|(v, w)| (pos[*v], w.clone()))
            .collect();
        AnnotatedGraph { n: keep.len(), labels, edges, index, annotated, eps: self.eps }
    }

    /// Number of edges with positive weight.
    pub fn positive_edge_count(&self) -> usize {
        self.edges.iter().filter(|e| e.2.is_positive_tol(self.eps)).count()
    }
}

/// Converts an annotated graph to its wildcard matrix: edge weights off the
/// diagonal, zero for non-adjacent pairs, annotations on the diagonal and `*`
/// for unannotated vertices.
pub fn graph_to_instance<S: Scalar>(g: &AnnotatedGraph<S>, k: usize) -> Result<Instance<S>> {
    if k == 0 {
        return Err(Error::NonPositiveBudget);
    }
    graph_to_matrix(g, k)
}

pub(crate) fn graph_to_matrix<S: Scalar>(g: &AnnotatedGraph<S>, k: usize) -> Result<Instance<S>> {
    let n = g.n;
    let mut entries = vec![Entry::Val(S::zero()); n * n];
    for i in 0..n {
        entries[i * n + i] = match g.annotated.get(&i) {
            Some(w) => Entry::Val(w.clone()),
            None => Entry::Star,
        };
    }
    for (u, v, w) in &g.edges {
        entries[u * n + v] = Entry::Val(w.clone());
        entries[v * n + u] = Entry::Val(w.clone());
    }
    Instance::new(n, k, entries, g.eps)
}

/// Inverse of [`graph_to_instance`]: positive off-diagonal entries become
/// edges and set diagonal entries become annotations. `labels` names the rows.
pub fn instance_to_graph<S: Scalar>(inst: &Instance<S>, labels: Vec<String>) -> Result<AnnotatedGraph<S>> {
    if labels.len() != inst.n() {
        return Err(Error::Dimension(format!("{} labels for {} rows", labels.len(), inst.n())));
    }
    let eps = inst.eps();
    let mut edges = Vec::new();
    let mut annotated = BTreeMap::new();
    for i in 0..inst.n() {
        if let Entry::Val(v) = inst.get(i, i) {
            annotated.insert(i, v.clone());
        }
        for j in i + 1..inst.n() {
            if let Entry::Val(v) = inst.get(i, j) {
                if v.is_positive_tol(eps) {
                    edges.push((i, j, v.clone()));
                }
            }
        }
    }
    AnnotatedGraph::with_labels(labels, edges, annotated, eps)
}

/// An `n x k` binary matrix whose rows may be unset ("null").
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialAssignment {
    k: usize,
    rows: Vec<Option<u64>>,
}

impl PartialAssignment {
    pub fn null(n: usize, k: usize) -> Self {
        assert!(k <= crate::MAX_COLUMNS, "too many columns");
        PartialAssignment { k, rows: vec![None; n] }
    }

    /// Fully filled matrix from bit-mask rows (bit `q` = column `q`).
    pub fn from_masks(k: usize, rows: Vec<u64>) -> Self {
        let mut a = Self::null(rows.len(), k);
        for (i, r) in rows.into_iter().enumerate() {
            a.set(i, Some(r));
        }
        a
    }

    /// Fully filled matrix from 0/1 rows.
    pub fn from_bits(rows: &[Vec<u8>]) -> Self {
        let k = rows.first().map_or(0, |r| r.len());
        let masks = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), k, "ragged binary matrix");
                r.iter().enumerate().fold(0u64, |m, (q, &b)| {
                    assert!(b <= 1, "binary entries only");
                    m | ((b as u64) << q)
                })
            })
            .collect();
        Self::from_masks(k, masks)
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, i: usize) -> Option<u64> {
        self.rows[i]
    }

    pub fn set(&mut self, i: usize, row: Option<u64>) {
        if let Some(r) = row {
            assert!(self.k == 64 || r >> self.k == 0, "row has bits beyond k");
        }
        self.rows[i] = row;
    }

    pub fn rows(&self) -> &[Option<u64>] {
        &self.rows
    }

    pub fn first_null(&self) -> Option<usize> {
        self.rows.iter().position(Option::is_none)
    }

    pub fn is_complete(&self) -> bool {
        self.rows.iter().all(Option::is_some)
    }

    /// Indices of non-null rows.
    pub fn filled(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.rows.iter().enumerate().filter_map(|(i, r)| r.map(|r| (i, r)))
    }

    pub fn bit(&self, i: usize, q: usize) -> Option<bool> {
        self.rows[i].map(|r| r >> q & 1 == 1)
    }
}

/// Diagonal weight matrix `W`, entries possibly unset.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalWeights<S>(pub Vec<Option<S>>);

impl<S: Scalar> DiagonalWeights<S> {
    pub fn null(k: usize) -> Self {
        DiagonalWeights(vec![None; k])
    }

    pub fn full(values: Vec<S>) -> Self {
        DiagonalWeights(values.into_iter().map(Some).collect())
    }

    pub fn ones(k: usize) -> Self {
        Self::full(vec![S::one(); k])
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, q: usize) -> Option<&S> {
        self.0[q].as_ref()
    }

    pub fn is_complete(&self) -> bool {
        self.0.iter().all(Option::is_some)
    }

    /// Replace unset entries by zero.
    pub fn zero_filled(&self) -> Self {
        DiagonalWeights(self.0.iter().map(|w| Some(w.clone().unwrap_or_else(S::zero))).collect())
    }

    pub fn values(&self) -> Option<Vec<S>> {
        self.0.iter().cloned().collect()
    }
}

/// Checks `A *= B W B^T`. Errors on shape mismatch or unset rows/weights.
pub fn verify<S: Scalar>(inst: &Instance<S>, b: &PartialAssignment, w: &DiagonalWeights<S>) -> Result<bool> {
    Ok(first_mismatch(inst, b, w)?.is_none())
}

/// The first `(i, j)` (row-major, `i <= j`) where `A` and `B W B^T` disagree.
pub fn first_mismatch<S: Scalar>(
    inst: &Instance<S>,
    b: &PartialAssignment,
    w: &DiagonalWeights<S>,
) -> Result<Option<(usize, usize)>> {
    if b.n() != inst.n() {
        return Err(Error::Dimension(format!("B has {} rows, instance has {}", b.n(), inst.n())));
    }
    if b.k() != w.k() {
        return Err(Error::Dimension(format!("B has {} columns, W has {}", b.k(), w.k())));
    }
    if !b.is_complete() {
        return Err(Error::Dimension("B has null rows".into()));
    }
    if !w.is_complete() {
        return Err(Error::Dimension("W has null entries".into()));
    }
    let eps = inst.eps();
    for i in 0..inst.n() {
        let bi = b.get(i).unwrap_or(0);
        for j in i..inst.n() {
            let bj = b.get(j).unwrap_or(0);
            let prod = masked_sum(&w.0, bi & bj).unwrap_or_else(S::zero);
            if !star_eq(inst.get(i, j), &Entry::Val(prod), eps) {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

/// A weighted clique: ascending vertex indices plus weight.
#[derive(Debug, Clone, PartialEq)]
pub struct Clique<S> {
    pub vertices: Vec<usize>,
    pub weight: S,
}

impl<S> Clique<S> {
    pub fn new(mut vertices: Vec<usize>, weight: S) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        Clique { vertices, weight }
    }
}

/// A set of weighted cliques.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition<S> {
    pub cliques: Vec<Clique<S>>,
}

impl<S: Scalar> Default for Decomposition<S> {
    fn default() -> Self {
        Decomposition { cliques: Vec::new() }
    }
}

impl<S: Scalar> Decomposition<S> {
    pub fn new(cliques: Vec<Clique<S>>) -> Self {
        Decomposition { cliques }
    }

    pub fn len(&self) -> usize {
        self.cliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cliques.is_empty()
    }

    /// Sum of clique weights.
    pub fn total_weight(&self) -> S {
        self.cliques.iter().fold(S::zero(), |acc, c| acc + c.weight.clone())
    }

    /// Cliques sorted by vertex set then weight; used for order-insensitive
    /// comparison.
    pub fn canonical(&self) -> Vec<Clique<S>> {
        let mut c = self.cliques.clone();
        c.sort_by(|a, b| {
            a.vertices
                .cmp(&b.vertices)
                .then(a.weight.partial_cmp(&b.weight).unwrap_or(core::cmp::Ordering::Equal))
        });
        c
    }

    /// `true` when both decompositions hold the same weighted vertex sets up to
    /// ordering.
    pub fn same_family(&self, other: &Self, eps: f64) -> bool {
        let a = self.canonical();
        let b = other.canonical();
        a.len() == b.len()
            && a.iter().zip(&b).all(|(x, y)| x.vertices == y.vertices && x.weight.close(&y.weight, eps))
    }

    /// Relabel vertices through `map` (index → new index).
    pub fn map_vertices(&self, map: &[usize]) -> Self {
        Decomposition {
            cliques: self
                .cliques
                .iter()
                .map(|c| Clique::new(c.vertices.iter().map(|&v| map[v]).collect(), c.weight.clone()))
                .collect(),
        }
    }
}

/// Column `q` of `B` with weight `W[q] > 0` becomes a clique; zero-weight and
/// empty columns are dropped. Unset weights are treated as zero.
pub fn decomposition_from<S: Scalar>(b: &PartialAssignment, w: &DiagonalWeights<S>, eps: f64) -> Decomposition<S> {
    let mut cliques = Vec::new();
    for q in 0..b.k() {
        let Some(weight) = w.get(q) else { continue };
        if !weight.is_positive_tol(eps) {
            continue;
        }
        let members: Vec<usize> = (0..b.n()).filter(|&i| b.bit(i, q) == Some(true)).collect();
        if !members.is_empty() {
            cliques.push(Clique::new(members, weight.clone()));
        }
    }
    Decomposition { cliques }
}

/// Why a decomposition fails to reproduce a graph.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation<S> {
    VertexOutOfRange(usize),
    /// Edge (or non-edge, `expected` zero) whose covering weight is wrong.
    Edge { u: usize, v: usize, expected: S, actual: S },
    Vertex { v: usize, expected: S, actual: S },
}

/// Checks every edge sum, every non-edge (must be zero) and every annotated
/// vertex sum.
pub fn verify_decomposition<S: Scalar>(g: &AnnotatedGraph<S>, d: &Decomposition<S>) -> bool {
    find_violation(g, d).is_none()
}

/// First violated constraint, scanning edges in ascending `(u, v)` order, then
/// annotated vertices.
pub fn find_violation<S: Scalar>(g: &AnnotatedGraph<S>, d: &Decomposition<S>) -> Option<Violation<S>> {
    let eps = g.eps();
    let mut sums: BTreeMap<(usize, usize), S> = BTreeMap::new();
    let mut vsum: BTreeMap<usize, S> = BTreeMap::new();
    for c in &d.cliques {
        for (a, &u) in c.vertices.iter().enumerate() {
            if u >= g.n() {
                return Some(Violation::VertexOutOfRange(u));
            }
            let e = vsum.entry(u).or_insert_with(S::zero);
            *e = e.clone() + c.weight.clone();
            for &v in &c.vertices[a + 1..] {
                let e = sums.entry((u, v)).or_insert_with(S::zero);
                *e = e.clone() + c.weight.clone();
            }
        }
    }
    let mut keys: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.0, e.1)).collect();
    keys.extend(sums.keys().copied());
    keys.sort_unstable();
    keys.dedup();
    for (u, v) in keys {
        let expected = g.weight(u, v).cloned().unwrap_or_else(S::zero);
        let actual = sums.get(&(u, v)).cloned().unwrap_or_else(S::zero);
        if !expected.close(&actual, eps) {
            return Some(Violation::Edge { u, v, expected, actual });
        }
    }
    for (&v, expected) in g.annotated() {
        let actual = vsum.get(&v).cloned().unwrap_or_else(S::zero);
        if !expected.close(&actual, eps) {
            return Some(Violation::Vertex { v, expected: expected.clone(), actual });
        }
    }
    None
}
